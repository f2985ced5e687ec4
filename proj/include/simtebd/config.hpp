#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "simtebd/bath.hpp"
#include "simtebd/tebd.hpp"

namespace simtebd {

/// Named generator preset: "sigma_z", "sigma_x", "mixed:x,z",
/// "plus_minus:a,b" or "explicit" (entries taken from h00, h11, h01).
struct GeneratorSpec {
    std::string preset{"sigma_z"};
    double h00{1.0};
    double h11{-1.0};
    cd h01{0.0, 0.0};

    SimilarityGenerator make(double beta) const;
};

struct RunConfig {
    ModelConfig model;
    GeneratorSpec generator;
    double beta{0.0};
    EvolutionConfig evolution;
    std::string output_prefix{"simtebd"};
    std::vector<double> sweep;
    double oracle_tolerance{1e-3};

    SimilarityGenerator make_generator() const { return generator.make(beta); }
};

/// Parses `key = value` lines with dotted keys; '#' starts a comment.
/// Unknown or repeated keys are rejected.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

}  // namespace simtebd
