#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "plrec/rng.hpp"

namespace plrec {

struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dim() const { return lower.size(); }
};

Bounds uniform_bounds(std::size_t dim, double lo, double hi);
std::vector<double> clamp_to_bounds(std::vector<double> x, const Bounds& bounds);

struct Objective {
    std::size_t dim = 0;
    std::function<double(const std::vector<double>&)> eval;  // pure, minimization
};

struct PasserConfig {
    int pop_size = 30;
    int max_iter = 500;
    double producer_fraction = 0.2;
    double investigator_fraction = 0.1;
    double awareness_probability = 0.8;
    double flight_length = 1.0;
    Bounds bounds;
    std::uint64_t seed = 0;
};

void validate_config(const PasserConfig& config, std::size_t dim);

struct Agent {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> previous_position;
    double fitness = 0.0;
    double prev_fitness = 0.0;
};

struct Population {
    std::vector<Agent> agents;
    std::vector<double> elite_position;       // best-so-far archive
    std::vector<double> elite_prev_position;  // archive one iteration back
    double elite_fitness = 0.0;
    std::size_t rejected_candidates = 0;
};

struct OptimizationResult {
    std::vector<double> best_position;
    double best_fitness = 0.0;
    std::vector<double> trace;  // best-so-far per iteration, non-increasing
    std::size_t rejected_candidates = 0;
};

// Divisions in the scrounger rule are guarded by this epsilon.
inline constexpr double kFitnessEpsilon = 1e-12;

// The three position-update rules, exposed with explicit draws so their
// arithmetic can be pinned down in tests.

struct ProducerDraws {
    double alpha1 = 0.5;  // (0, 1]
    double alarm = 0.0;   // R2 in [0, 1), shared per iteration
    double step = 0.0;    // r_i in [0, 1)
};

std::vector<double> producer_update(const std::vector<double>& x,
                                    const std::vector<double>& elite, int iteration,
                                    const PasserConfig& config, const ProducerDraws& draws);

struct ScroungerDraws {
    double q = 0.0;       // N(0, 1)
    double rand01 = 0.0;  // [0, 1)
    double k = 0.0;       // [-1, 1]
};

std::vector<double> scrounger_update(const std::vector<double>& x,
                                     const std::vector<double>& velocity, int rank,
                                     int pop_size, const std::vector<double>& best_producer,
                                     const std::vector<double>& elite,
                                     const std::vector<double>& elite_prev, double fit_curr,
                                     double fit_prev, const PasserConfig& config,
                                     const ScroungerDraws& draws);

struct InvestigatorDraws {
    double alpha = 0.0;         // [0, 1)
    std::vector<double> signs;  // +1/-1 per dimension
};

std::vector<double> investigator_update(const std::vector<double>& x,
                                        const std::vector<double>& x_prev,
                                        const std::vector<double>& elite,
                                        const PasserConfig& config,
                                        const InvestigatorDraws& draws);

// Batch fitness evaluation: OpenMP kernel plus serial reference. All random
// draws happen on the coordinator before dispatch, so parallel schedules
// cannot change results.
std::vector<double> evaluate_batch(const Objective& objective,
                                   const std::vector<std::vector<double>>& positions);
std::vector<double> evaluate_batch_serial(const Objective& objective,
                                          const std::vector<std::vector<double>>& positions);

Population initialize_population(const PasserConfig& config, const Objective& objective,
                                 Rng& rng);
void step(Population& population, const Objective& objective, int iteration,
          const PasserConfig& config, Rng& rng);

OptimizationResult optimize(const Objective& objective, const PasserConfig& config);

// Canonical PSO baseline: inertia 0.729, cognitive/social 1.49445, velocity
// clamped to 20% of the range per dimension.
OptimizationResult pso_optimize(const Objective& objective, const PasserConfig& config);

// pop_size * max_iter uniform samples, best kept.
OptimizationResult random_search(const Objective& objective, const PasserConfig& config);

enum class OptimizerKind { Passer, Pso, RandomSearch };
OptimizationResult run_optimizer(OptimizerKind kind, const Objective& objective,
                                 const PasserConfig& config);
const char* optimizer_name(OptimizerKind kind);

struct BenchmarkFunction {
    std::string name;
    Objective objective;
    Bounds bounds;
    double best_value = 0.0;
    std::vector<double> best_position;
};

// sphere, Rosenbrock, Rastrigin, Ackley at dimensions {2, 5, 10}.
std::vector<BenchmarkFunction> benchmark_suite();

// CSV trace export: header "iter,best_fitness", 9 significant digits.
void write_trace_csv(const OptimizationResult& result, const std::string& path);

}  // namespace plrec
