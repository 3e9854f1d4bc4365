#pragma once

#include <vector>

#include "lass/core.hpp"

namespace lass {

/// Loads enter the exponential decay as exp(-load / load_scale).
struct ProbConfig {
    double load_scale_mb = 1.0;

    void validate() const;
};

/// Expected-load bookkeeping after a decision: load += len.
void update_load(StatisticLog& log, ServerId server, double length_mb);

/// Decays the chosen server's probability by exp(-load/scale) using its
/// already-updated load, and spreads the removed mass evenly over the other
/// M-1 servers. The vector is renormalised only if rounding pushes the sum
/// more than 1e-9 away from one. With a single server this is a no-op.
void apply_selection(StatisticLog& log, ServerId chosen, const ProbConfig& cfg);

/// update_load followed by apply_selection on the same server.
void commit_decision(StatisticLog& log, ServerId chosen, double length_mb, const ProbConfig& cfg);

/// Server ids by stored probability, highest first; ties go to the smaller id.
std::vector<ServerId> servers_by_prob_desc(const StatisticLog& log);

/// log(p_i) - load_i / scale for every server: the decay of the stored
/// probability evaluated against the server's current load, in log space so
/// heavy servers never underflow to a tie at zero.
std::vector<double> selection_log_scores(const StatisticLog& log, const ProbConfig& cfg);

/// Server ids by selection score, highest first; ties go to the smaller id.
/// This is the ordering every log-assisted policy ranks servers by.
std::vector<ServerId> servers_by_score_desc(const StatisticLog& log, const ProbConfig& cfg);

}  // namespace lass
