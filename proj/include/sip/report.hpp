#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sip/diagnostics.hpp"

namespace sip {

// Everything the diagnose pipeline learned about one feature matrix. Optional
// fields are serialized as null when the corresponding stage was skipped.
struct SipReport {
    std::string layer_tag;
    std::size_t d = 0;
    std::size_t k = 0;
    std::size_t n = 0;
    std::optional<double> q_star;  // clipping quantile actually applied
    double ridge = 0.0;
    double gap_hat = 0.0;
    double delta_hat = 0.0;
    double ratio = 0.0;
    bool pass = false;
    std::optional<MarginFit> kappa;
    std::optional<TailReport> tail;
    std::optional<SampleComplexity> complexity;
    std::optional<double> bernstein_t;
    std::optional<RiskBound> risk;
    std::optional<double> probe_accuracy;
    std::vector<std::string> warnings;
};

// Deterministic JSON: fixed key order, stable number formatting, no
// timestamps. Non-finite values become null and append a warning entry;
// warnings always serialize last.
std::string to_json(const SipReport& report);

}  // namespace sip
