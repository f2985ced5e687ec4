#include "simtebd/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "simtebd/errors.hpp"

namespace simtebd {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    double out = 0.0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || v.empty() || !std::isfinite(out)) {
        throw Error(ErrorKind::Config, key + ": '" + v + "' is not a finite number");
    }
    return out;
}

int parse_int(const std::string& key, const std::string& text) {
    const std::string v = trim(text);
    int out = 0;
    const char* end = v.data() + v.size();
    auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end || v.empty()) {
        throw Error(ErrorKind::Config, key + ": '" + v + "' is not an integer");
    }
    return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
    return out;
}

std::pair<double, double> preset_pair(const std::string& preset, std::size_t colon) {
    const auto values = parse_list("generator.preset", preset.substr(colon + 1));
    if (values.size() != 2) {
        throw Error(ErrorKind::Config, "generator.preset '" + preset + "' needs exactly two numbers");
    }
    return {values[0], values[1]};
}

}  // namespace

SimilarityGenerator GeneratorSpec::make(double beta) const {
    if (preset == "sigma_z") return SimilarityGenerator::sigma_z(beta);
    if (preset == "sigma_x") return SimilarityGenerator::sigma_x(beta);
    if (preset == "explicit") {
        CMatrix m(2, 2);
        m << h00, h01, std::conj(h01), h11;
        return {beta, m};
    }
    const auto colon = preset.find(':');
    if (colon != std::string::npos) {
        const std::string name = preset.substr(0, colon);
        const auto [a, b] = preset_pair(preset, colon);
        if (name == "mixed") return SimilarityGenerator::mixed(beta, a, b);
        if (name == "plus_minus") return SimilarityGenerator::plus_minus(beta, a, b);
    }
    throw Error(ErrorKind::Config, "unknown generator preset '" + preset + "'");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    double h01_re = 0.0;
    double h01_im = 0.0;

    using Setter = std::function<void(const std::string&, const std::string&)>;
    const std::map<std::string, Setter> setters{
        {"model.delta", [&](auto& k, auto& v) { cfg.model.delta = parse_double(k, v); }},
        {"model.eta", [&](auto& k, auto& v) { cfg.model.eta = parse_double(k, v); }},
        {"model.omega_c", [&](auto& k, auto& v) { cfg.model.omega_c = parse_double(k, v); }},
        {"model.temperature", [&](auto& k, auto& v) { cfg.model.temperature = parse_double(k, v); }},
        {"model.omega_max", [&](auto& k, auto& v) { cfg.model.omega_max = parse_double(k, v); }},
        {"model.n_modes", [&](auto& k, auto& v) { cfg.model.n_modes = parse_int(k, v); }},
        {"model.fock_dim", [&](auto& k, auto& v) { cfg.model.fock_dim = parse_int(k, v); }},
        {"generator.preset", [&](auto&, auto& v) { cfg.generator.preset = trim(v); }},
        {"generator.beta", [&](auto& k, auto& v) { cfg.beta = parse_double(k, v); }},
        {"generator.h00", [&](auto& k, auto& v) { cfg.generator.h00 = parse_double(k, v); }},
        {"generator.h11", [&](auto& k, auto& v) { cfg.generator.h11 = parse_double(k, v); }},
        {"generator.h01_re", [&](auto& k, auto& v) { h01_re = parse_double(k, v); }},
        {"generator.h01_im", [&](auto& k, auto& v) { h01_im = parse_double(k, v); }},
        {"evolution.dt", [&](auto& k, auto& v) { cfg.evolution.dt = parse_double(k, v); }},
        {"evolution.t_final", [&](auto& k, auto& v) { cfg.evolution.t_final = parse_double(k, v); }},
        {"evolution.threshold", [&](auto& k, auto& v) { cfg.evolution.policy.threshold = parse_double(k, v); }},
        {"evolution.max_bond", [&](auto& k, auto& v) { cfg.evolution.policy.max_bond = parse_int(k, v); }},
        {"evolution.record_stride", [&](auto& k, auto& v) { cfg.evolution.record_stride = parse_int(k, v); }},
        {"evolution.bond_cap", [&](auto& k, auto& v) { cfg.evolution.bond_cap = parse_int(k, v); }},
        {"output.prefix", [&](auto&, auto& v) { cfg.output_prefix = trim(v); }},
        {"sweep.betas", [&](auto& k, auto& v) { cfg.sweep = parse_list(k, v); }},
        {"oracle.tolerance", [&](auto& k, auto& v) { cfg.oracle_tolerance = parse_double(k, v); }},
    };

    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = line.substr(eq + 1);
        const auto it = setters.find(key);
        if (it == setters.end()) {
            throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        if (!seen.insert(key).second) {
            throw Error(ErrorKind::Config, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
        }
        it->second(key, value);
    }
    cfg.generator.h01 = cd(h01_re, h01_im);

    std::set<double> unique(cfg.sweep.begin(), cfg.sweep.end());
    if (unique.size() != cfg.sweep.size()) {
        throw Error(ErrorKind::Config, "sweep.betas contains duplicate values");
    }
    if (!(cfg.oracle_tolerance > 0.0)) throw Error(ErrorKind::Config, "oracle.tolerance must be > 0");

    cfg.model.validate();
    cfg.evolution.validate();
    cfg.generator.make(cfg.beta);  // rejects bad presets before any computation
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Config, "cannot read config file " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace simtebd
