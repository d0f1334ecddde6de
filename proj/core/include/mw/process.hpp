#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mw/kernel.hpp"
#include "mw/rng.hpp"

namespace mw {

// Underlying Markov processes Z. Discrete walks live on the discrete axis,
// Brownian motion on the continuous one.
struct ProcessModel {
    enum class Family { LazySRW, GenericRW, HeavyTailedRW, BrownianMotion };

    Family family = Family::LazySRW;
    int d = 1;
    double p_lazy = 0.5;   // LazySRW: stay probability
    double mean = 0.0;     // GenericRW: increment mean (per coordinate)
    double sd = 1.0;       // GenericRW: increment sd
    double omega = 1.5;    // HeavyTailedRW: tail index, (0,1) or (1,2)
    double drift = 0.0;    // BrownianMotion: drift per unit time

    static ProcessModel lazy_srw(int d, double p_lazy = 0.5);
    static ProcessModel generic_rw(int d, double mean, double sd);
    static ProcessModel heavy_tailed(double omega);
    static ProcessModel brownian(int d, double drift = 0.0);

    bool lattice() const { return family == Family::LazySRW; }
    TimeAxis natural_axis() const {
        return family == Family::BrownianMotion ? TimeAxis::Continuous
                                                : TimeAxis::Discrete;
    }
    void check_axis(TimeAxis axis) const;
    std::string describe() const;
};

// One run of the process: start position, duration, endpoint distributed as
// Z(duration), and enough state to reveal interior positions consistently.
// Discrete walks replay increments from a per-run substream (memoizing the
// prefix); Brownian runs refine a skeleton with bridge samples.
class RunRecord {
public:
    RunRecord() = default;

    double start_time = 0.0;
    double duration = 0.0;

    const std::vector<double>& start() const { return start_; }
    const std::vector<double>& endpoint() const { return endpoint_; }
    std::uint64_t substream() const { return seed_; }

    // Reinitializes in place, keeping heap capacity for reuse across runs.
    void reinit(double start_time, double duration, const double* start, int d,
                std::uint64_t seed);

    friend class ProcessSampler;

private:
    int d_ = 1;
    std::uint64_t seed_ = 0;
    std::vector<double> start_;
    std::vector<double> endpoint_;
    // Discrete replay state.
    Rng replay_rng_{0};
    std::int64_t replayed_ = 0;
    std::vector<double> prefix_;  // positions at offsets 1..replayed_, strided
    // Brownian skeleton (offsets strictly increasing, includes 0 and duration).
    std::vector<double> sk_off_;
    std::vector<double> sk_pos_;  // strided by d
};

// Samples runs and interior positions for one process model.
class ProcessSampler {
public:
    explicit ProcessSampler(ProcessModel model);

    const ProcessModel& model() const { return model_; }

    // Draws a fresh substream key from rng and fills `rec` with a run of
    // `duration` started at `start`; the endpoint is distributed as
    // Z(duration) under P_start.
    void evolve_run(const double* start, double start_time, double duration,
                    Rng& rng, RunRecord& rec) const;
    RunRecord evolve_run(const std::vector<double>& start, double start_time,
                         double duration, Rng& rng) const;

    // Position at `offset` in [0, duration); reveals and memoizes lazily.
    // The result pointer stays valid until the record is next modified.
    const double* position_at(RunRecord& rec, double offset, Rng& rng) const;

    // One increment step applied in place (discrete walks only).
    void step(double* pos, Rng& rng) const;

private:
    void replay_to(RunRecord& rec, std::int64_t offset) const;
    const double* bridge_at(RunRecord& rec, double offset, Rng& rng) const;

    ProcessModel model_;
};

// Normalization metadata: a(t) = a_scale * t^a_exp, b(t) = b_slope * t,
// f == 1 for every implemented model, g(x) = g_slope * x, and the limit law.
struct ErgodicProfile {
    enum class Limit { Normal, Stable };

    int d = 1;
    double a_scale = 1.0;
    double a_exp = 0.5;
    double b_slope = 0.0;
    double g_slope = 0.0;
    Limit limit = Limit::Normal;
    double omega = 0.0;  // stable index when limit == Stable

    double a(double t) const { return a_scale * std::pow(t, a_exp); }
    double b(double t) const { return b_slope * t; }
    double f(double) const { return 1.0; }
    double g(double x) const { return g_slope * x; }

    // One draw from the limit law gamma (d coordinates).
    void sample_limit(Rng& rng, double* out) const;
};

ErgodicProfile ergodic_profile(const ProcessModel& model);

// Symmetric alpha-stable variate, Chambers-Mallows-Stuck construction.
double sample_symmetric_stable(double alpha, Rng& rng);

}  // namespace mw
