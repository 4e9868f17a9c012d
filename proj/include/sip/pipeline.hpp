#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sip/fisher.hpp"
#include "sip/report.hpp"

namespace sip {

struct DiagnoseOptions {
    std::size_t k = 1;
    double ridge = 0.0;
    double delta = 0.1;  // confidence level for the concentration envelope
    std::optional<double> clip_q;  // explicit clipping quantile
    bool auto_clip = false;        // sweep for a quantile when tails look heavy
    ClipMode clip_mode = ClipMode::NormClip;
    std::uint64_t seed = 0;
    std::size_t n_splits = 8;  // split-half repetitions for delta_hat
    std::string layer_tag;
};

// Full diagnostic pass over one feature matrix: optional clipping, Fisher
// estimate, eigengap vs split-half deviation verdict, concentration envelope
// and sample-size planning, and (when labels are present) margin-exponent,
// probe cross-validation and the spectral risk bound.
SipReport diagnose(const FeatureMatrix& f, const DiagnoseOptions& opt);

}  // namespace sip
