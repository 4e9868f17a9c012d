#include "sip/report.hpp"

#include <cmath>
#include <sstream>

#include "sip/io.hpp"

namespace sip {

namespace {

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

class Writer {
  public:
    explicit Writer(std::vector<std::string> warnings) : warnings_(std::move(warnings)) {}

    void field_str(const std::string& key, const std::string& v) {
        sep(key);
        os_ << '"' << escape(v) << '"';
    }
    void field_uint(const std::string& key, std::uint64_t v) {
        sep(key);
        os_ << v;
    }
    void field_bool(const std::string& key, bool v) {
        sep(key);
        os_ << (v ? "true" : "false");
    }
    void field_num(const std::string& key, double v) {
        sep(key);
        if (!std::isfinite(v)) {
            os_ << "null";
            warnings_.push_back(key + " was not finite");
        } else {
            os_ << format_double(v);
        }
    }
    void field_null(const std::string& key) {
        sep(key);
        os_ << "null";
    }
    void open(const std::string& key) {
        sep(key);
        os_ << '{';
        first_ = true;
    }
    void close() {
        os_ << '}';
        first_ = false;
    }
    std::string finish() {
        sep("warnings");
        os_ << '[';
        for (std::size_t i = 0; i < warnings_.size(); ++i)
            os_ << (i ? "," : "") << '"' << escape(warnings_[i]) << '"';
        os_ << "]}";
        return os_.str();
    }
    std::ostringstream& raw() { return os_; }

  private:
    void sep(const std::string& key) {
        if (!first_) os_ << ',';
        first_ = false;
        os_ << '"' << escape(key) << "\":";
    }
    std::ostringstream os_;
    bool first_ = true;
    std::vector<std::string> warnings_;
};

}  // namespace

std::string to_json(const SipReport& r) {
    Writer w(r.warnings);
    w.raw() << '{';
    w.field_str("layer_tag", r.layer_tag);
    w.field_uint("d", r.d);
    w.field_uint("k", r.k);
    w.field_uint("n", r.n);
    if (r.q_star)
        w.field_num("q_star", *r.q_star);
    else
        w.field_null("q_star");
    w.field_num("ridge", r.ridge);
    w.field_num("gap_hat", r.gap_hat);
    w.field_num("delta_hat", r.delta_hat);
    w.field_num("ratio", r.ratio);
    w.field_str("verdict", r.pass ? "pass" : "fail");
    if (r.kappa) {
        w.open("kappa_hat");
        w.field_num("kappa", r.kappa->kappa);
        w.field_num("c", r.kappa->c);
        w.field_num("r_squared", r.kappa->r_squared);
        w.close();
    } else {
        w.field_null("kappa_hat");
    }
    if (r.tail) {
        w.open("tail");
        w.field_num("kurtosis", r.tail->kurtosis);
        w.field_num("hill_index", r.tail->hill_index);
        w.field_bool("heavy", r.tail->heavy);
        w.close();
    } else {
        w.field_null("tail");
    }
    if (r.complexity) {
        w.open("n_min");
        w.field_uint("n_var", r.complexity->n_var);
        w.field_uint("n_gap", r.complexity->n_gap);
        w.field_uint("n_min", r.complexity->n_min);
        if (r.complexity->empirical_n_min)
            w.field_uint("empirical_n_min", *r.complexity->empirical_n_min);
        else
            w.field_null("empirical_n_min");
        w.close();
    } else {
        w.field_null("n_min");
    }
    if (r.bernstein_t)
        w.field_num("bernstein_t", *r.bernstein_t);
    else
        w.field_null("bernstein_t");
    if (r.risk) {
        w.open("risk_bound");
        w.field_num("raw", r.risk->raw);
        w.field_num("clamped", r.risk->clamped);
        w.close();
    } else {
        w.field_null("risk_bound");
    }
    if (r.probe_accuracy)
        w.field_num("probe_accuracy", *r.probe_accuracy);
    else
        w.field_null("probe_accuracy");
    return w.finish();
}

}  // namespace sip
