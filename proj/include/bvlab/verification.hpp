#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bvlab/exec.hpp"

namespace bvlab {

// One randomized identity sweep: max_residual is the worst |delta| seen.
struct SweepResult {
    std::string name;
    std::size_t cases = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

struct VerificationReport {
    std::vector<SweepResult> results;
    bool pass = false;
};

SweepResult run_additive_identity_sweep(std::size_t cases, std::uint64_t seed);

SweepResult run_squared_error_sweep(std::size_t cases, std::uint64_t seed);

struct BridgeSweepOptions {
    std::size_t cases = 120;
    std::uint64_t seed = 19;
    double effect_tolerance = 1e-5;
    double checksum_tolerance = 1e-10;
    // debugging hook: shifts the closed-form median so a breach is observable
    double fault_offset = 0.0;
};

// Returns two entries: closed-vs-numeric effects, then the additive checksum.
std::vector<SweepResult> run_bridge_sweep(const BridgeSweepOptions& opt);

SweepResult run_added_error_sweep(std::size_t cases, std::uint64_t seed,
                                  std::size_t monte_carlo_draws, Execution exec);

SweepResult run_ensemble_sweep(std::size_t cases, std::uint64_t seed);

VerificationReport run_verification(std::uint64_t seed, double fault_offset, Execution exec);

}  // namespace bvlab
