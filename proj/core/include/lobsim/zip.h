#pragma once

#include <optional>

#include "lobsim/exchange.h"
#include "lobsim/rng.h"

namespace lobsim {

/// ZIP hyperparameters. Per-trader values are drawn uniformly from the ranges.
struct ZipParams {
    double beta_min = 0.1;
    double beta_max = 0.5;
    double momentum_min = 0.2;
    double momentum_max = 0.8;
    double margin_min = 0.05;
    double margin_max = 0.35;
    double ca = 0.05;  // absolute target perturbation, ticks
    double cr = 0.05;  // relative target perturbation

    void validate() const;
};

/// Zero-Intelligence-Plus margin learner. The quote is limit * (1 + margin);
/// sellers keep margin >= 0, buyers margin <= 0.
class ZipEngine {
public:
    ZipEngine(Role role, const ZipParams& p, Rng rng);

    /// Installs a new limit, keeping the learned margin.
    void set_limit(Price limit);
    void clear_limit() { limit_.reset(); }

    double margin() const { return margin_; }
    void set_margin(double m);
    double learning_rate() const { return beta_; }
    double momentum() const { return momentum_; }

    /// Unrounded quote price; nothing without a limit.
    std::optional<double> price() const;
    std::optional<Price> quote() const;

    /// Updates the margin from one book event.
    void respond(const LobSnapshot& after, const BookEvent& event);

    /// Shout-level rules: `accepted` means the shout traded at `price`.
    void respond_to_shout(Side shout_side, double price, bool accepted);

private:
    double target_up(double q);
    double target_down(double q);
    void alter(double target);

    Role role_;
    ZipParams params_;
    Rng rng_;
    double beta_;
    double momentum_;
    double margin_;
    double last_change_ = 0.0;
    std::optional<Price> limit_;
};

}  // namespace lobsim
