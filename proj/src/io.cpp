#include "sip/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace sip {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_double(const std::string& tok, const std::string& where) {
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
        fail(ErrorCode::FormatError, where + ": bad numeric field '" + tok + "'");
    return v;
}

void must_read(std::ifstream& in, void* dst, std::size_t bytes, const std::string& path) {
    in.read(static_cast<char*>(dst), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in.gcount()) != bytes)
        fail(ErrorCode::FormatError, path + ": truncated file");
}

constexpr char kMagic[4] = {'S', 'I', 'P', 'F'};

}  // namespace

std::string format_double(double v) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v || (v != v && back != back)) break;
    }
    return buf;
}

FeatureMatrix read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) fail(ErrorCode::FormatError, path + ": empty file");
    std::vector<std::string> head = split_commas(line);
    bool has_labels = !head.empty() && head.back() == "label";
    std::size_t d = head.size() - (has_labels ? 1 : 0);
    if (d < 1) fail(ErrorCode::FormatError, path + ": no feature columns");
    for (std::size_t j = 0; j < d; ++j)
        if (head[j] != "f" + std::to_string(j))
            fail(ErrorCode::FormatError, path + ": header must be f0,f1,...[,label]");
    std::vector<double> vals;
    std::vector<int> labels;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> toks = split_commas(line);
        if (toks.size() != head.size())
            fail(ErrorCode::FormatError,
                 path + ": row " + std::to_string(n + 1) + " has wrong column count");
        for (std::size_t j = 0; j < d; ++j) vals.push_back(parse_double(toks[j], path));
        if (has_labels) {
            double lv = parse_double(toks[d], path);
            if (lv != 1.0 && lv != -1.0)
                fail(ErrorCode::LabelError,
                     path + ": row " + std::to_string(n + 1) + " label must be -1 or 1");
            labels.push_back(static_cast<int>(lv));
        }
        ++n;
    }
    if (n == 0) fail(ErrorCode::FormatError, path + ": no data rows");
    FeatureMatrix f;
    f.rows = Matrix(n, d);
    std::memcpy(f.rows.data(), vals.data(), n * d * sizeof(double));
    if (has_labels) f.labels = std::move(labels);
    f.validate();
    return f;
}

void write_csv(const std::string& path, const FeatureMatrix& f) {
    f.validate();
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
    for (std::size_t j = 0; j < f.d(); ++j) out << (j ? "," : "") << "f" << j;
    if (f.labels) out << ",label";
    out << "\n";
    for (std::size_t i = 0; i < f.n(); ++i) {
        for (std::size_t j = 0; j < f.d(); ++j)
            out << (j ? "," : "") << format_double(f.rows(i, j));
        if (f.labels) out << "," << (*f.labels)[i];
        out << "\n";
    }
    if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

FeatureMatrix read_f32bin(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    char magic[4];
    must_read(in, magic, 4, path);
    if (std::memcmp(magic, kMagic, 4) != 0)
        fail(ErrorCode::FormatError, path + ": not a SIPF file");
    std::uint32_t version = 0;
    must_read(in, &version, 4, path);
    if (version != 1)
        fail(ErrorCode::FormatError, path + ": unsupported version " + std::to_string(version));
    std::uint8_t has_labels = 0;
    must_read(in, &has_labels, 1, path);
    if (has_labels > 1) fail(ErrorCode::FormatError, path + ": bad label flag");
    std::uint64_t n = 0, d = 0;
    must_read(in, &n, 8, path);
    must_read(in, &d, 8, path);
    if (n == 0) fail(ErrorCode::TooFewSamples, path + ": zero rows");
    if (d == 0 || n > (1ull << 32) || d > (1ull << 24))
        fail(ErrorCode::FormatError, path + ": implausible dimensions");
    FeatureMatrix f;
    f.rows = Matrix(n, d);
    std::vector<float> buf(d);
    for (std::uint64_t i = 0; i < n; ++i) {
        must_read(in, buf.data(), d * sizeof(float), path);
        double* row = f.rows.row(i);
        for (std::uint64_t j = 0; j < d; ++j) row[j] = buf[j];
    }
    if (has_labels) {
        std::vector<std::int8_t> lab(n);
        must_read(in, lab.data(), n, path);
        std::vector<int> labels(n);
        for (std::uint64_t i = 0; i < n; ++i) labels[i] = lab[i];
        f.labels = std::move(labels);
    }
    f.validate();
    return f;
}

void write_f32bin(const std::string& path, const FeatureMatrix& f) {
    f.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
    out.write(kMagic, 4);
    std::uint32_t version = 1;
    out.write(reinterpret_cast<const char*>(&version), 4);
    std::uint8_t has_labels = f.labels ? 1 : 0;
    out.write(reinterpret_cast<const char*>(&has_labels), 1);
    std::uint64_t n = f.n(), d = f.d();
    out.write(reinterpret_cast<const char*>(&n), 8);
    out.write(reinterpret_cast<const char*>(&d), 8);
    std::vector<float> buf(d);
    for (std::size_t i = 0; i < f.n(); ++i) {
        const double* row = f.rows.row(i);
        for (std::size_t j = 0; j < d; ++j) buf[j] = static_cast<float>(row[j]);
        out.write(reinterpret_cast<const char*>(buf.data()),
                  static_cast<std::streamsize>(d * sizeof(float)));
    }
    if (f.labels) {
        std::vector<std::int8_t> lab(f.n());
        for (std::size_t i = 0; i < f.n(); ++i) lab[i] = static_cast<std::int8_t>((*f.labels)[i]);
        out.write(reinterpret_cast<const char*>(lab.data()), static_cast<std::streamsize>(f.n()));
    }
    if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

FeatureMatrix read_features(const std::string& path) {
    auto ends_with = [&](const char* suf) {
        std::size_t l = std::strlen(suf);
        return path.size() >= l && path.compare(path.size() - l, l, suf) == 0;
    };
    if (ends_with(".csv")) return read_csv(path);
    if (ends_with(".f32bin")) return read_f32bin(path);
    fail(ErrorCode::FormatError, path + ": unknown extension (expected .csv or .f32bin)");
}

void write_series_csv(const std::string& path, const ExperimentSeries& series) {
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot open " + path + " for writing");
    out << "x,y_mean,y_lo,y_hi\n";
    for (std::size_t i = 0; i < series.x.size(); ++i)
        out << format_double(series.x[i]) << "," << format_double(series.y_mean[i]) << ","
            << format_double(series.y_lo[i]) << "," << format_double(series.y_hi[i]) << "\n";
    if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

std::map<std::string, std::string> read_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::InvalidConfig,
                 path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            fail(ErrorCode::InvalidConfig, path + ":" + std::to_string(lineno) + ": empty key");
        out[key] = val;
    }
    return out;
}

}  // namespace sip
