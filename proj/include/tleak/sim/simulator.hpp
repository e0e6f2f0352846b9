#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "tleak/hdl/ast.hpp"
#include "tleak/sim/trace.hpp"

namespace tleak::sim {

struct InitPolicy {
    enum class Kind { Zero, Random };
    Kind kind = Kind::Zero;
    std::uint64_t seed = 0;

    static InitPolicy zero() { return {}; }
    static InitPolicy random(std::uint64_t seed) { return {Kind::Random, seed}; }
};

struct SimOptions {
    int reset_cycles = 2;
    // Consecutive unchanged samples that end an open-ended step.
    int quiescence = 8;
    std::size_t max_cycles = 10000;
    InitPolicy init;
    std::string run_id = "run";
};

inline constexpr int kMaxSettleIterations = 1000;

// Two-state cycle simulator over a flattened design. Construction compiles
// every process once; run() is const and safe to call from several threads.
class Simulator {
public:
    explicit Simulator(const hdl::DesignHierarchy& h);
    ~Simulator();
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    SimulationResult run(const Stimulus& stimulus, const SimOptions& options = {}) const;
    const hdl::DesignHierarchy& design() const { return design_; }

private:
    struct Impl;
    const hdl::DesignHierarchy& design_;
    std::unique_ptr<Impl> impl_;
};

SimulationResult simulate(const hdl::DesignHierarchy& h, const Stimulus& stimulus, const SimOptions& options = {});

} // namespace tleak::sim
