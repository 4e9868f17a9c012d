#pragma once

#include <map>
#include <string>

#include "sip/fisher.hpp"
#include "sip/synthetic.hpp"

namespace sip {

// CSV with header f0,f1,...,f{d-1} and an optional trailing label column of
// +-1 integers. Values round-trip through %.17g.
FeatureMatrix read_csv(const std::string& path);
void write_csv(const std::string& path, const FeatureMatrix& f);

// Packed binary: magic "SIPF", u32 version (1), u8 has_labels, u64 n, u64 d,
// n*d float32 row-major, then n int8 labels when present. Little-endian.
FeatureMatrix read_f32bin(const std::string& path);
void write_f32bin(const std::string& path, const FeatureMatrix& f);

// Dispatch on extension: .csv or .f32bin. Anything else is FormatError.
FeatureMatrix read_features(const std::string& path);

// x,y_mean,y_lo,y_hi columns.
void write_series_csv(const std::string& path, const ExperimentSeries& series);

// key=value lines; '#' starts a comment; blank lines ignored; later keys win.
std::map<std::string, std::string> read_config(const std::string& path);

// Shortest decimal form that round-trips a double (%.17g with a %.15g/%.16g
// downgrade when exact).
std::string format_double(double v);

}  // namespace sip
