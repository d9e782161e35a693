#include "lobsim/zip.h"

#include <algorithm>
#include <cmath>

namespace lobsim {

void ZipParams::validate() const {
    auto range_ok = [](double lo, double hi) { return lo >= 0.0 && lo <= hi; };
    if (!range_ok(beta_min, beta_max) || beta_max > 1.0) throw ConfigError("zip: bad learning-rate range");
    if (!range_ok(momentum_min, momentum_max) || momentum_max >= 1.0) {
        throw ConfigError("zip: bad momentum range");
    }
    if (!range_ok(margin_min, margin_max) || margin_max >= 1.0) throw ConfigError("zip: bad margin range");
    if (ca < 0.0 || cr < 0.0) throw ConfigError("zip: perturbations must be >= 0");
}

ZipEngine::ZipEngine(Role role, const ZipParams& p, Rng rng)
    : role_(role), params_(p), rng_(std::move(rng)) {
    beta_ = uniform(rng_, p.beta_min, p.beta_max);
    momentum_ = uniform(rng_, p.momentum_min, p.momentum_max);
    const double m = uniform(rng_, p.margin_min, p.margin_max);
    margin_ = role == Role::seller ? m : -m;
}

void ZipEngine::set_limit(Price limit) { limit_ = limit; }

void ZipEngine::set_margin(double m) {
    margin_ = role_ == Role::seller ? std::max(0.0, m) : std::clamp(m, -1.0, 0.0);
}

std::optional<double> ZipEngine::price() const {
    if (!limit_) return std::nullopt;
    return static_cast<double>(limit_->ticks) * (1.0 + margin_);
}

std::optional<Price> ZipEngine::quote() const {
    auto p = price();
    if (!p) return std::nullopt;
    return Price{static_cast<std::int32_t>(std::lround(*p))};
}

double ZipEngine::target_up(double q) {
    const double rel = q * (1.0 + params_.cr * uniform01(rng_));
    return rel + params_.ca * uniform01(rng_);
}

double ZipEngine::target_down(double q) {
    const double rel = q * (1.0 - params_.cr * uniform01(rng_));
    return rel - params_.ca * uniform01(rng_);
}

void ZipEngine::alter(double target) {
    const double p = *price();
    const double change = (1.0 - momentum_) * beta_ * (target - p) + momentum_ * last_change_;
    last_change_ = change;
    set_margin((p + change) / static_cast<double>(limit_->ticks) - 1.0);
}

void ZipEngine::respond_to_shout(Side shout_side, double q, bool accepted) {
    if (!limit_) return;
    const double p = *price();
    if (role_ == Role::seller) {
        if (accepted) {
            if (p <= q) {
                alter(target_up(q));
            } else if (shout_side == Side::bid) {
                alter(target_down(q));
            }
        } else if (shout_side == Side::ask && p >= q) {
            alter(target_down(q));
        }
    } else {
        if (accepted) {
            if (p >= q) {
                alter(target_down(q));
            } else if (shout_side == Side::ask) {
                alter(target_up(q));
            }
        } else if (shout_side == Side::bid && p <= q) {
            alter(target_up(q));
        }
    }
}

void ZipEngine::respond(const LobSnapshot& after, const BookEvent& event) {
    if (!event.order || event.kind == EventKind::cancel) return;
    const Order& shout = *event.order;
    if (!event.trades.empty()) {
        // The accepted shout is the resting order the incoming one hit.
        respond_to_shout(opposite(shout.side), static_cast<double>(event.trades.back().price.ticks), true);
        return;
    }
    // An unaccepted shout only counts once it is the best quote on its side.
    auto top = level(after, shout.side, 1);
    if (top && top->price == shout.price) {
        respond_to_shout(shout.side, static_cast<double>(shout.price.ticks), false);
    }
}

}  // namespace lobsim
