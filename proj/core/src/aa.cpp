#include "lobsim/aa.h"

#include <algorithm>
#include <cmath>

namespace lobsim {

void AaParams::validate() const {
    auto range_ok = [](double lo, double hi) { return lo > 0.0 && lo <= hi && hi <= 1.0; };
    if (!range_ok(beta1_min, beta1_max)) throw ConfigError("aa: bad short-term learning-rate range");
    if (!range_ok(beta2_min, beta2_max)) throw ConfigError("aa: bad long-term learning-rate range");
    if (lambda_r < 0.0 || lambda_a < 0.0) throw ConfigError("aa: perturbations must be >= 0");
    if (!(eta >= 1.0)) throw ConfigError("aa: eta must be >= 1");
    if (!(theta_min < theta_max) || theta_init < theta_min || theta_init > theta_max) {
        throw ConfigError("aa: theta must satisfy min <= init <= max");
    }
    if (window < 1) throw ConfigError("aa: window must be >= 1");
    if (!(rho > 0.0 && rho <= 1.0)) throw ConfigError("aa: rho must be in (0, 1]");
    if (initial_aggressiveness_max < 0.0 || initial_aggressiveness_max > 1.0) {
        throw ConfigError("aa: initial aggressiveness must be in [0, 1]");
    }
    if (initial_margin < 0.0 || initial_margin >= 1.0) throw ConfigError("aa: initial margin must be in [0, 1)");
}

namespace {

constexpr double kFlatTheta = 1e-9;

// (e^{r theta} - 1) / (e^theta - 1), the fraction of the way to the extreme at r in [0, 1].
double curve(double r, double theta) {
    if (std::abs(theta) < kFlatTheta) return r;
    return std::expm1(r * theta) / std::expm1(theta);
}

// Inverse of curve for x in [0, 1].
double curve_inverse(double x, double theta) {
    x = std::clamp(x, 0.0, 1.0);
    if (std::abs(theta) < kFlatTheta) return x;
    return std::log1p(x * std::expm1(theta)) / theta;
}

}  // namespace

AaEngine::AaEngine(Role role, const AaParams& p, PriceRange range, Rng rng)
    : role_(role), params_(p), range_(range) {
    beta1_ = uniform(rng, p.beta1_min, p.beta1_max);
    beta2_ = uniform(rng, p.beta2_min, p.beta2_max);
    r_ = -p.initial_aggressiveness_max * uniform01(rng);
    theta_ = p.theta_init;
}

void AaEngine::set_aggressiveness(double r) { r_ = std::clamp(r, -1.0, 1.0); }

std::optional<double> AaEngine::target_for(double r) const {
    if (!limit_ || !equilibrium_) return std::nullopt;
    const double l = limit_->ticks;
    const double eq = *equilibrium_;
    const double pmax = range_.max.ticks;
    r = std::clamp(r, -1.0, 1.0);
    if (role_ == Role::buyer) {
        if (l > eq) {
            return r >= 0.0 ? eq + (l - eq) * curve(r, theta_) : eq * (1.0 - curve(-r, theta_));
        }
        return r >= 0.0 ? l : l * (1.0 - curve(-r, theta_));
    }
    if (l < eq) {
        return r >= 0.0 ? l + (eq - l) * (1.0 - curve(r, theta_))
                        : eq + (pmax - eq) * curve(-r, theta_);
    }
    return r >= 0.0 ? l : l + (pmax - l) * curve(-r, theta_);
}

std::optional<double> AaEngine::aggressiveness_for(double q) const {
    if (!limit_ || !equilibrium_) return std::nullopt;
    const double l = limit_->ticks;
    const double eq = *equilibrium_;
    const double pmax = range_.max.ticks;
    if (role_ == Role::buyer) {
        if (l > eq) {
            if (q >= eq) return curve_inverse((q - eq) / (l - eq), theta_);
            return -curve_inverse(1.0 - q / eq, theta_);
        }
        if (q >= l) return 0.0;
        return -curve_inverse(1.0 - q / l, theta_);
    }
    if (l < eq) {
        if (q <= eq) return curve_inverse(1.0 - (q - l) / (eq - l), theta_);
        return -curve_inverse((q - eq) / (pmax - eq), theta_);
    }
    if (q <= l) return 0.0;
    return -curve_inverse((q - l) / (pmax - l), theta_);
}

std::optional<double> AaEngine::quote_price(const LobSnapshot& s) const {
    if (!limit_) return std::nullopt;
    const double l = limit_->ticks;
    const auto bid = best_bid(s);
    const auto ask = best_ask(s);
    if (role_ == Role::buyer) {
        if (bid && l <= bid->price.ticks) return std::nullopt;
        if (!equilibrium_) return l * (1.0 - params_.initial_margin);
        const double tau = *target();
        if (ask && ask->price.ticks <= tau) return static_cast<double>(ask->price.ticks);
        const double o_bid = bid ? bid->price.ticks : range_.min.ticks;
        return o_bid + (tau - o_bid) / params_.eta;
    }
    if (ask && l >= ask->price.ticks) return std::nullopt;
    if (!equilibrium_) return l * (1.0 + params_.initial_margin);
    const double tau = *target();
    if (bid && bid->price.ticks >= tau) return static_cast<double>(bid->price.ticks);
    const double o_ask = ask ? ask->price.ticks : range_.max.ticks;
    return o_ask - (o_ask - tau) / params_.eta;
}

std::optional<Price> AaEngine::quote(const LobSnapshot& s) const {
    auto p = quote_price(s);
    if (!p) return std::nullopt;
    // Round toward the trader's own side of the spread.
    double rounded = role_ == Role::buyer ? std::floor(*p + 1e-9) : std::ceil(*p - 1e-9);
    const auto tau = target();
    if (equilibrium_ && tau) {
        // On a tick grid the smoothed step can round to no move at all; while the
        // target lies beyond the best quote, improve on it by at least one tick.
        if (role_ == Role::buyer) {
            if (const auto bid = best_bid(s); bid && *tau >= bid->price.ticks + 1) {
                rounded = std::max(rounded, static_cast<double>(bid->price.ticks + 1));
            }
        } else if (const auto ask = best_ask(s); ask && *tau <= ask->price.ticks - 1) {
            rounded = std::min(rounded, static_cast<double>(ask->price.ticks - 1));
        }
    }
    return Price{static_cast<std::int32_t>(rounded)};
}

void AaEngine::update_equilibrium() {
    double num = 0.0;
    double den = 0.0;
    double w = 1.0;
    for (auto it = recent_.rbegin(); it != recent_.rend(); ++it) {
        num += w * *it;
        den += w;
        w *= params_.rho;
    }
    equilibrium_ = num / den;
}

void AaEngine::update_theta() {
    const double eq = *equilibrium_;
    double ss = 0.0;
    for (double p : recent_) ss += (p - eq) * (p - eq);
    const double alpha = std::sqrt(ss / static_cast<double>(recent_.size())) / eq;
    if (!alpha_seen_) {
        alpha_min_ = alpha_max_ = alpha;
        alpha_seen_ = true;
    } else {
        alpha_min_ = std::min(alpha_min_, alpha);
        alpha_max_ = std::max(alpha_max_, alpha);
    }
    const double span = alpha_max_ - alpha_min_;
    const double alpha_bar = span > 0.0 ? (alpha - alpha_min_) / span : 0.5;
    const double desired = (params_.theta_max - params_.theta_min) *
                               (1.0 - alpha_bar * std::exp(params_.gamma * (alpha_bar - 1.0))) +
                           params_.theta_min;
    theta_ += beta2_ * (desired - theta_);
    theta_ = std::clamp(theta_, params_.theta_min, params_.theta_max);
}

void AaEngine::learn_aggressiveness(double q, bool more_aggressive) {
    const auto rq = aggressiveness_for(q);
    if (!rq) return;
    const double delta = more_aggressive ? (1.0 + params_.lambda_r) * *rq + params_.lambda_a
                                         : (1.0 - params_.lambda_r) * *rq - params_.lambda_a;
    set_aggressiveness(r_ + beta1_ * (delta - r_));
}

void AaEngine::observe_trade(double q) {
    recent_.push_back(q);
    while (static_cast<int>(recent_.size()) > params_.window) recent_.pop_front();
    update_equilibrium();
    update_theta();
    const auto tau = target();
    if (!tau) return;
    // A trade below a buyer's target (above a seller's) means it could have been less aggressive.
    const bool overpaid = role_ == Role::buyer ? *tau >= q : *tau <= q;
    learn_aggressiveness(q, !overpaid);
}

void AaEngine::observe_shout(Side side, double q) {
    const auto tau = target();
    if (!tau) return;
    if (role_ == Role::buyer && side == Side::bid && *tau <= q) learn_aggressiveness(q, true);
    if (role_ == Role::seller && side == Side::ask && *tau >= q) learn_aggressiveness(q, true);
}

void AaEngine::respond(const BookEvent& event) {
    if (!event.order || event.kind == EventKind::cancel) return;
    if (!event.trades.empty()) {
        for (const auto& t : event.trades) observe_trade(t.price.ticks);
        return;
    }
    observe_shout(event.order->side, event.order->price.ticks);
}

}  // namespace lobsim
