#pragma once

#include <deque>
#include <optional>

#include "lobsim/exchange.h"
#include "lobsim/rng.h"

namespace lobsim {

/// Adaptive-Aggressiveness hyperparameters.
struct AaParams {
    double lambda_r = 0.05;  // relative aggressiveness perturbation
    double lambda_a = 0.05;  // absolute aggressiveness perturbation
    double beta1_min = 0.1;  // short-term (aggressiveness) learning rate range
    double beta1_max = 0.5;
    double beta2_min = 0.1;  // long-term (theta) learning rate range
    double beta2_max = 0.5;
    double eta = 3.0;  // bid/ask smoothing toward the target
    double gamma = 2.0;
    double theta_init = -2.0;
    double theta_min = -8.0;
    double theta_max = 2.0;
    int window = 5;  // transactions in the equilibrium estimate
    double rho = 0.9;  // recency weight of the estimate
    double initial_aggressiveness_max = 0.3;  // r starts at -U[0, this]
    double initial_margin = 0.1;  // cold-start quote distance from the limit, relative

    void validate() const;
};

/// AA bidding agent state: equilibrium estimate from recent transactions,
/// aggressiveness r in [-1, 1] (short term), and curve shape theta (long term).
class AaEngine {
public:
    AaEngine(Role role, const AaParams& p, PriceRange range, Rng rng);

    void set_limit(Price limit) { limit_ = limit; }
    void clear_limit() { limit_.reset(); }

    std::optional<double> equilibrium() const { return equilibrium_; }
    double aggressiveness() const { return r_; }
    double theta() const { return theta_; }
    void set_aggressiveness(double r);

    /// Target price for aggressiveness r under the current estimate and limit.
    std::optional<double> target_for(double r) const;
    std::optional<double> target() const { return target_for(r_); }

    /// Aggressiveness whose target equals q (clamped to [-1, 1]).
    std::optional<double> aggressiveness_for(double q) const;

    /// Quote before rounding; nothing without a limit, or when the limit is
    /// already beaten by the outstanding quote on the trader's side.
    std::optional<double> quote_price(const LobSnapshot& s) const;
    std::optional<Price> quote(const LobSnapshot& s) const;

    void observe_trade(double q);
    /// An unaccepted bid or ask at price q.
    void observe_shout(Side side, double q);

    void respond(const BookEvent& event);

private:
    void update_equilibrium();
    void update_theta();
    void learn_aggressiveness(double q, bool more_aggressive);

    Role role_;
    AaParams params_;
    PriceRange range_;
    double beta1_;
    double beta2_;
    double r_;
    double theta_;
    std::optional<double> equilibrium_;
    std::deque<double> recent_;
    double alpha_min_ = 0.0;
    double alpha_max_ = 0.0;
    bool alpha_seen_ = false;
    std::optional<Price> limit_;
};

}  // namespace lobsim
