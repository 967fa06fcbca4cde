#pragma once

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cuspext/common.hpp"
#include "cuspext/extension.hpp"
#include "cuspext/geometry.hpp"
#include "cuspext/version.hpp"

namespace cuspext::config {

// ---------------------------------------------------------------------------
// Parsing of the compact spec strings used on the command line:
//   --domain cusp2d:gamma_tilde=0.5      --domain pick:n=3,gamma_tilde=0.5
//   --grid   N=128,beta=2                --point  r=0.5,s=0.7854
// All validation happens here, before any computation starts.
// ---------------------------------------------------------------------------

inline double parse_number(const std::string& text, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(text, &pos);
        if (pos != text.size()) throw validation_error(what + ": trailing characters in '" + text + "'");
        return v;
    } catch (const validation_error&) {
        throw;
    } catch (const std::exception&) {
        throw validation_error(what + ": cannot parse number '" + text + "'");
    }
}

/// Splits "key=value,key=value" into a map; duplicate keys are rejected.
inline std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> out;
    if (text.empty()) return out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw validation_error("expected key=value, got '" + item + "'");
        const std::string key = item.substr(0, eq);
        if (!out.emplace(key, item.substr(eq + 1)).second)
            throw validation_error("duplicate key '" + key + "'");
    }
    return out;
}

struct ParsedSpec {
    std::string kind;
    std::map<std::string, std::string> params;
};

inline ParsedSpec parse_spec_string(const std::string& text) {
    ParsedSpec s;
    const auto colon = text.find(':');
    s.kind = text.substr(0, colon);
    if (colon != std::string::npos) s.params = parse_kv(text.substr(colon + 1));
    if (s.kind.empty()) throw validation_error("empty spec string");
    return s;
}

/// Resolves the cusp exponent from either gamma_tilde or gamma parameters;
/// when both are supplied they must agree.
inline double resolve_gamma_tilde(const std::map<std::string, std::string>& params) {
    const auto gt = params.find("gamma_tilde");
    const auto g = params.find("gamma");
    if (gt == params.end() && g == params.end())
        throw validation_error("cusp-type domain requires gamma_tilde or gamma");
    std::optional<double> from_gt, from_g;
    if (gt != params.end()) {
        const double v = parse_number(gt->second, "gamma_tilde");
        geometry::DomainSpec::check_gamma_tilde(v);
        from_gt = v;
    }
    if (g != params.end()) {
        const double v = parse_number(g->second, "gamma");
        if (!(v > 0.0)) throw validation_error("gamma must be positive");
        from_g = 1.0 / (v + 1.0);
    }
    if (from_gt && from_g && std::abs(*from_gt - *from_g) > 1e-9)
        throw validation_error("gamma and gamma_tilde are inconsistent");
    return from_gt ? *from_gt : *from_g;
}

inline geometry::DomainSpec parse_domain(const std::string& text) {
    const ParsedSpec s = parse_spec_string(text);
    auto get_n = [&](int dflt, int min_n) {
        int n = dflt;
        const auto it = s.params.find("n");
        if (it != s.params.end()) {
            const double v = parse_number(it->second, "n");
            n = static_cast<int>(v);
            if (n != v) throw validation_error("n must be an integer");
        }
        if (n < min_n)
            throw validation_error("n must be >= " + std::to_string(min_n) + " for " + s.kind);
        if (n > kMaxDim - 1)
            throw validation_error("n must be <= " + std::to_string(kMaxDim - 1));
        return n;
    };
    if (s.kind == "disc") return geometry::DomainSpec::disc();
    if (s.kind == "square") return geometry::DomainSpec::square();
    if (s.kind == "ball") return geometry::DomainSpec::ball(get_n(2, 2));
    if (s.kind == "cusp2d") return geometry::DomainSpec::cusp(resolve_gamma_tilde(s.params));
    if (s.kind == "pick") return geometry::DomainSpec::pick(get_n(3, 2), resolve_gamma_tilde(s.params));
    if (s.kind == "ridge") return geometry::DomainSpec::ridge(get_n(3, 3), resolve_gamma_tilde(s.params));
    throw validation_error("unknown domain kind '" + s.kind +
                           "' (expected disc, square, ball, cusp2d, pick, ridge)");
}

struct GridParams {
    int N = 128;
    double beta = 2.0;
};

inline GridParams parse_grid(const std::string& text) {
    GridParams g;
    for (const auto& [key, value] : parse_kv(text)) {
        if (key == "N") {
            const double v = parse_number(value, "N");
            g.N = static_cast<int>(v);
            if (g.N != v || g.N < 8) throw validation_error("grid N must be an integer >= 8");
        } else if (key == "beta") {
            g.beta = parse_number(value, "beta");
            if (!(g.beta >= 1.0)) throw validation_error("grid beta must be >= 1");
        } else {
            throw validation_error("unknown grid parameter '" + key + "'");
        }
    }
    return g;
}

inline std::map<std::string, double> parse_point(const std::string& text) {
    std::map<std::string, double> out;
    for (const auto& [key, value] : parse_kv(text)) out[key] = parse_number(value, key);
    return out;
}

/// Exponent validation shared by the distortion/extension commands.
inline void check_pq(double p, double q) {
    if (!(p > 1.0)) throw validation_error("p must exceed 1");
    if (!(q >= 1.0 && q <= p)) throw validation_error("q must lie in [1, p]");
}

// ---------------------------------------------------------------------------
// Function battery manifests: a line-oriented key=value table, e.g.
//   fn = x
//   fn = r_pow_cos:exponent=0.6
// Blank lines and '#' comments are ignored.
// ---------------------------------------------------------------------------

inline extension::SampledFunction parse_function_spec(const std::string& text) {
    const ParsedSpec s = parse_spec_string(text);
    double param = 0.0;
    for (const auto& [key, value] : s.params) {
        if (key == "exponent")
            param = parse_number(value, "exponent");
        else
            throw validation_error("unknown function parameter '" + key + "'");
    }
    return extension::test_function(s.kind, param);
}

inline std::vector<extension::SampledFunction> parse_manifest_text(const std::string& text) {
    std::vector<extension::SampledFunction> fns;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        // trim
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        line = line.substr(first, last - first + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw validation_error("manifest line is not key=value: " + line);
        std::string key = line.substr(0, eq);
        key.erase(key.find_last_not_of(" \t") + 1);
        std::string value = line.substr(eq + 1);
        value.erase(0, value.find_first_not_of(" \t"));
        if (key != "fn") throw validation_error("unknown manifest key '" + key + "'");
        fns.push_back(parse_function_spec(value));
    }
    if (fns.empty()) throw validation_error("manifest lists no functions");
    return fns;
}

inline std::vector<extension::SampledFunction> load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open manifest file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_manifest_text(buf.str());
}

/// The default verification battery.
inline std::vector<extension::SampledFunction> default_battery() {
    return parse_manifest_text(
        "fn = one\nfn = x\nfn = y\nfn = x2\nfn = x2_minus_y2\nfn = r_pow_cos:exponent=0.6\n");
}

/// Thread-count resolution: the environment variable overrides the flag.
inline int resolve_threads(int flag_value) {
    if (const char* env = std::getenv("CUSP_EXTEND_THREADS")) {
        const std::string text(env);
        const double v = parse_number(text, "CUSP_EXTEND_THREADS");
        if (v < 1 || v != static_cast<int>(v))
            throw validation_error("CUSP_EXTEND_THREADS must be a positive integer");
        return static_cast<int>(v);
    }
    return flag_value;
}

}  // namespace cuspext::config
