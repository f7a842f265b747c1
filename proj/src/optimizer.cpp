#include "plrec/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "plrec/matrix.hpp"
#include "plrec/parallel.hpp"

namespace plrec {

Bounds uniform_bounds(std::size_t dim, double lo, double hi) {
    Bounds b;
    b.lower.assign(dim, lo);
    b.upper.assign(dim, hi);
    return b;
}

std::vector<double> clamp_to_bounds(std::vector<double> x, const Bounds& bounds) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        x[j] = std::min(std::max(x[j], bounds.lower[j]), bounds.upper[j]);
    }
    return x;
}

void validate_config(const PasserConfig& config, std::size_t dim) {
    if (config.pop_size < 4) throw std::domain_error("config: pop_size < 4");
    if (config.max_iter < 1) throw std::domain_error("config: max_iter < 1");
    if (!(config.producer_fraction > 0.0 && config.producer_fraction < 1.0)) {
        throw std::domain_error("config: producer_fraction outside (0, 1)");
    }
    if (!(config.investigator_fraction > 0.0 && config.investigator_fraction < 1.0)) {
        throw std::domain_error("config: investigator_fraction outside (0, 1)");
    }
    if (config.producer_fraction * config.pop_size < 1.0) {
        throw std::domain_error("config: producer_fraction * pop_size < 1");
    }
    if (config.investigator_fraction * config.pop_size < 1.0) {
        throw std::domain_error("config: investigator_fraction * pop_size < 1");
    }
    if (!(config.awareness_probability > 0.0 && config.awareness_probability < 1.0)) {
        throw std::domain_error("config: awareness_probability outside (0, 1)");
    }
    if (!(config.flight_length > 0.0)) throw std::domain_error("config: flight_length <= 0");
    if (config.bounds.lower.size() != dim || config.bounds.upper.size() != dim) {
        throw std::domain_error("config: bounds dimension mismatch");
    }
    for (std::size_t j = 0; j < dim; ++j) {
        if (!(config.bounds.lower[j] < config.bounds.upper[j])) {
            throw std::domain_error("config: lower bound not below upper bound");
        }
    }
}

std::vector<double> producer_update(const std::vector<double>& x,
                                    const std::vector<double>& elite, int iteration,
                                    const PasserConfig& config, const ProducerDraws& draws) {
    std::vector<double> next(x.size());
    if (draws.alarm < config.awareness_probability) {
        const double decay =
            std::exp(-static_cast<double>(iteration) / (draws.alpha1 * config.max_iter));
        for (std::size_t j = 0; j < x.size(); ++j) {
            next[j] = x[j] * decay + (elite[j] - x[j]);
        }
    } else {
        for (std::size_t j = 0; j < x.size(); ++j) {
            next[j] = (x[j] + draws.step * config.flight_length) * (elite[j] - x[j]);
        }
    }
    return clamp_to_bounds(std::move(next), config.bounds);
}

std::vector<double> scrounger_update(const std::vector<double>& x,
                                     const std::vector<double>& velocity, int rank,
                                     int pop_size, const std::vector<double>& best_producer,
                                     const std::vector<double>& elite,
                                     const std::vector<double>& elite_prev, double fit_curr,
                                     double fit_prev, const PasserConfig& config,
                                     const ScroungerDraws& draws) {
    std::vector<double> next(x.size());
    if (2 * rank > pop_size) {
        // hungry half: relocate near the producer's find
        const double rank_sq = static_cast<double>(rank) * static_cast<double>(rank);
        for (std::size_t j = 0; j < x.size(); ++j) {
            next[j] = draws.q * std::exp((elite_prev[j] - x[j]) / rank_sq) +
                      draws.rand01 * (best_producer[j] - x[j]) / (fit_curr + kFitnessEpsilon);
        }
    } else {
        const double denom = fit_curr - fit_prev + kFitnessEpsilon;
        for (std::size_t j = 0; j < x.size(); ++j) {
            next[j] = x[j] + draws.k * (x[j] - elite[j]) / denom + draws.q * velocity[j];
        }
    }
    return clamp_to_bounds(std::move(next), config.bounds);
}

std::vector<double> investigator_update(const std::vector<double>& x,
                                        const std::vector<double>& x_prev,
                                        const std::vector<double>& elite,
                                        const PasserConfig& config,
                                        const InvestigatorDraws& draws) {
    const std::size_t d = x.size();
    // s = |x| . A+ with A+ = A / d, a scalar broadcast across dimensions.
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        s += std::fabs(x[j]) * draws.signs[j] / static_cast<double>(d);
    }
    std::vector<double> next(d);
    for (std::size_t j = 0; j < d; ++j) {
        next[j] = draws.alpha * x[j] - 0.5 * draws.alpha * x_prev[j] + s -
                  draws.alpha * elite[j];
    }
    return clamp_to_bounds(std::move(next), config.bounds);
}

std::vector<double> evaluate_batch_serial(const Objective& objective,
                                          const std::vector<std::vector<double>>& positions) {
    std::vector<double> fitness(positions.size());
    serial_for(positions.size(),
               [&](std::size_t i) { fitness[i] = objective.eval(positions[i]); });
    return fitness;
}

std::vector<double> evaluate_batch(const Objective& objective,
                                   const std::vector<std::vector<double>>& positions) {
    std::vector<double> fitness(positions.size());
    parallel_for(positions.size(),
                 [&](std::size_t i) { fitness[i] = objective.eval(positions[i]); });
    return fitness;
}

namespace {

std::string format_point(const std::vector<double>& x) {
    std::ostringstream out;
    out << '(';
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (j) out << ", ";
        out << format_sig(x[j], 9);
    }
    out << ')';
    return out.str();
}

void sort_by_fitness(std::vector<Agent>& agents) {
    std::stable_sort(agents.begin(), agents.end(),
                     [](const Agent& a, const Agent& b) { return a.fitness < b.fitness; });
}

int ceil_count(double fraction, int pop_size) {
    return static_cast<int>(std::ceil(fraction * pop_size));
}

}  // namespace

Population initialize_population(const PasserConfig& config, const Objective& objective,
                                 Rng& rng) {
    validate_config(config, objective.dim);

    Population pop;
    pop.agents.resize(static_cast<std::size_t>(config.pop_size));
    std::vector<std::vector<double>> positions(pop.agents.size());
    for (auto& x : positions) {
        x.resize(objective.dim);
        for (std::size_t j = 0; j < objective.dim; ++j) {
            x[j] = rng.uniform(config.bounds.lower[j], config.bounds.upper[j]);
        }
    }

    const std::vector<double> fitness = evaluate_batch(objective, positions);
    for (std::size_t i = 0; i < pop.agents.size(); ++i) {
        if (!std::isfinite(fitness[i])) {
            throw std::runtime_error("initialize_population: objective non-finite at " +
                                     format_point(positions[i]));
        }
        Agent& agent = pop.agents[i];
        agent.position = positions[i];
        agent.previous_position = positions[i];
        agent.velocity.assign(objective.dim, 0.0);
        agent.fitness = fitness[i];
        agent.prev_fitness = fitness[i];
    }
    sort_by_fitness(pop.agents);
    pop.elite_position = pop.agents.front().position;
    pop.elite_prev_position = pop.agents.front().position;
    pop.elite_fitness = pop.agents.front().fitness;
    return pop;
}

void step(Population& pop, const Objective& objective, int iteration,
          const PasserConfig& config, Rng& rng) {
    const int n = config.pop_size;
    sort_by_fitness(pop.agents);

    const double alarm = rng.next_double();  // one R2 per iteration
    const int producer_count = std::min(ceil_count(config.producer_fraction, n), n);

    std::vector<std::vector<double>> candidates(pop.agents.size());
    for (int i = 0; i < producer_count; ++i) {
        ProducerDraws draws;
        draws.alpha1 = rng.unit_open();
        draws.alarm = alarm;
        draws.step = rng.next_double();
        candidates[i] =
            producer_update(pop.agents[i].position, pop.elite_position, iteration, config, draws);
    }
    const std::vector<double>& best_producer = candidates[0];

    for (int i = producer_count; i < n; ++i) {
        const Agent& agent = pop.agents[i];
        ScroungerDraws draws;
        draws.q = rng.normal();
        draws.rand01 = rng.next_double();
        draws.k = rng.uniform(-1.0, 1.0);
        candidates[i] = scrounger_update(agent.position, agent.velocity, i + 1, n,
                                         best_producer, pop.elite_position,
                                         pop.elite_prev_position, agent.fitness,
                                         agent.prev_fitness, config, draws);
    }

    // Investigators relocate on top of whatever update they just took.
    const int investigator_count = std::min(ceil_count(config.investigator_fraction, n), n);
    std::vector<std::size_t> order(pop.agents.size());
    std::iota(order.begin(), order.end(), 0);
    for (int k = 0; k < investigator_count; ++k) {
        const std::size_t pick = k + rng.below(order.size() - k);
        std::swap(order[k], order[pick]);
    }
    for (int k = 0; k < investigator_count; ++k) {
        const std::size_t i = order[k];
        InvestigatorDraws draws;
        draws.alpha = rng.next_double();
        draws.signs.resize(objective.dim);
        for (auto& sign : draws.signs) sign = rng.sign();
        candidates[i] =
            investigator_update(candidates[i], pop.agents[i].position, pop.elite_position,
                                config, draws);
    }

    const std::vector<double> fitness = evaluate_batch(objective, candidates);
    for (std::size_t i = 0; i < pop.agents.size(); ++i) {
        Agent& agent = pop.agents[i];
        if (!std::isfinite(fitness[i])) {
            ++pop.rejected_candidates;  // keep prior position
            continue;
        }
        agent.previous_position = agent.position;
        agent.velocity.resize(objective.dim);
        for (std::size_t j = 0; j < objective.dim; ++j) {
            agent.velocity[j] = candidates[i][j] - agent.position[j];
        }
        agent.prev_fitness = agent.fitness;
        agent.position = candidates[i];
        agent.fitness = fitness[i];
    }

    pop.elite_prev_position = pop.elite_position;
    for (const Agent& agent : pop.agents) {
        if (agent.fitness < pop.elite_fitness) {
            pop.elite_fitness = agent.fitness;
            pop.elite_position = agent.position;
        }
    }
}

OptimizationResult optimize(const Objective& objective, const PasserConfig& config) {
    Rng rng(config.seed);
    Population pop = initialize_population(config, objective, rng);

    OptimizationResult result;
    result.trace.reserve(static_cast<std::size_t>(config.max_iter));
    for (int h = 1; h <= config.max_iter; ++h) {
        step(pop, objective, h, config, rng);
        result.trace.push_back(pop.elite_fitness);
    }
    result.best_position = pop.elite_position;
    result.best_fitness = pop.elite_fitness;
    result.rejected_candidates = pop.rejected_candidates;
    return result;
}

OptimizationResult pso_optimize(const Objective& objective, const PasserConfig& config) {
    validate_config(config, objective.dim);
    Rng rng(config.seed);

    const double inertia = 0.729;
    const double cognitive = 1.49445;
    const double social = 1.49445;

    const std::size_t n = static_cast<std::size_t>(config.pop_size);
    const std::size_t d = objective.dim;
    std::vector<double> vmax(d);
    for (std::size_t j = 0; j < d; ++j) {
        vmax[j] = 0.2 * (config.bounds.upper[j] - config.bounds.lower[j]);
    }

    std::vector<std::vector<double>> positions(n), velocities(n), personal_best(n);
    for (auto& x : positions) {
        x.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            x[j] = rng.uniform(config.bounds.lower[j], config.bounds.upper[j]);
        }
    }
    for (auto& v : velocities) v.assign(d, 0.0);

    std::vector<double> fitness = evaluate_batch(objective, positions);
    std::vector<double> personal_best_fitness = fitness;
    personal_best = positions;

    std::size_t best_index = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (fitness[i] < fitness[best_index]) best_index = i;
    }
    std::vector<double> global_best = positions[best_index];
    double global_best_fitness = fitness[best_index];

    OptimizationResult result;
    result.trace.reserve(static_cast<std::size_t>(config.max_iter));
    for (int iter = 0; iter < config.max_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < d; ++j) {
                const double r1 = rng.next_double();
                const double r2 = rng.next_double();
                double v = inertia * velocities[i][j] +
                           cognitive * r1 * (personal_best[i][j] - positions[i][j]) +
                           social * r2 * (global_best[j] - positions[i][j]);
                v = std::min(std::max(v, -vmax[j]), vmax[j]);
                velocities[i][j] = v;
                positions[i][j] = std::min(
                    std::max(positions[i][j] + v, config.bounds.lower[j]),
                    config.bounds.upper[j]);
            }
        }
        fitness = evaluate_batch(objective, positions);
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite(fitness[i])) continue;
            if (fitness[i] < personal_best_fitness[i]) {
                personal_best_fitness[i] = fitness[i];
                personal_best[i] = positions[i];
            }
            if (fitness[i] < global_best_fitness) {
                global_best_fitness = fitness[i];
                global_best = positions[i];
            }
        }
        result.trace.push_back(global_best_fitness);
    }
    result.best_position = global_best;
    result.best_fitness = global_best_fitness;
    return result;
}

OptimizationResult random_search(const Objective& objective, const PasserConfig& config) {
    validate_config(config, objective.dim);
    Rng rng(config.seed);

    const std::size_t n = static_cast<std::size_t>(config.pop_size);
    const std::size_t d = objective.dim;
    std::vector<std::vector<double>> positions(n, std::vector<double>(d));

    OptimizationResult result;
    result.trace.reserve(static_cast<std::size_t>(config.max_iter));
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_position;
    for (int iter = 0; iter < config.max_iter; ++iter) {
        for (auto& x : positions) {
            for (std::size_t j = 0; j < d; ++j) {
                x[j] = rng.uniform(config.bounds.lower[j], config.bounds.upper[j]);
            }
        }
        const std::vector<double> fitness = evaluate_batch(objective, positions);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::isfinite(fitness[i]) && fitness[i] < best) {
                best = fitness[i];
                best_position = positions[i];
            }
        }
        result.trace.push_back(best);
    }
    result.best_position = best_position;
    result.best_fitness = best;
    return result;
}

OptimizationResult run_optimizer(OptimizerKind kind, const Objective& objective,
                                 const PasserConfig& config) {
    switch (kind) {
        case OptimizerKind::Passer: return optimize(objective, config);
        case OptimizerKind::Pso: return pso_optimize(objective, config);
        case OptimizerKind::RandomSearch: return random_search(objective, config);
    }
    throw std::logic_error("run_optimizer: unknown kind");
}

const char* optimizer_name(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::Passer: return "pl";
        case OptimizerKind::Pso: return "pso";
        case OptimizerKind::RandomSearch: return "random";
    }
    return "unknown";
}

namespace {

BenchmarkFunction make_benchmark(const std::string& name, std::size_t dim, double lo,
                                 double hi, double best_value,
                                 std::vector<double> best_position,
                                 std::function<double(const std::vector<double>&)> eval) {
    BenchmarkFunction fn;
    fn.name = name + "_d" + std::to_string(dim);
    fn.objective = {dim, std::move(eval)};
    fn.bounds = uniform_bounds(dim, lo, hi);
    fn.best_value = best_value;
    fn.best_position = std::move(best_position);
    return fn;
}

}  // namespace

std::vector<BenchmarkFunction> benchmark_suite() {
    std::vector<BenchmarkFunction> suite;
    const double pi = 3.14159265358979323846;
    for (std::size_t dim : {2u, 5u, 10u}) {
        suite.push_back(make_benchmark(
            "sphere", dim, -5.12, 5.12, 0.0, std::vector<double>(dim, 0.0),
            [](const std::vector<double>& x) {
                double sum = 0.0;
                for (double v : x) sum += v * v;
                return sum;
            }));
        suite.push_back(make_benchmark(
            "rosenbrock", dim, -5.0, 10.0, 0.0, std::vector<double>(dim, 1.0),
            [](const std::vector<double>& x) {
                double sum = 0.0;
                for (std::size_t i = 0; i + 1 < x.size(); ++i) {
                    const double a = x[i + 1] - x[i] * x[i];
                    const double b = 1.0 - x[i];
                    sum += 100.0 * a * a + b * b;
                }
                return sum;
            }));
        suite.push_back(make_benchmark(
            "rastrigin", dim, -5.12, 5.12, 0.0, std::vector<double>(dim, 0.0),
            [pi](const std::vector<double>& x) {
                double sum = 10.0 * static_cast<double>(x.size());
                for (double v : x) sum += v * v - 10.0 * std::cos(2.0 * pi * v);
                return sum;
            }));
        suite.push_back(make_benchmark(
            "ackley", dim, -32.768, 32.768, 0.0, std::vector<double>(dim, 0.0),
            [pi](const std::vector<double>& x) {
                const double n = static_cast<double>(x.size());
                double sq = 0.0, cs = 0.0;
                for (double v : x) {
                    sq += v * v;
                    cs += std::cos(2.0 * pi * v);
                }
                return -20.0 * std::exp(-0.2 * std::sqrt(sq / n)) - std::exp(cs / n) +
                       20.0 + std::exp(1.0);
            }));
    }
    return suite;
}

void write_trace_csv(const OptimizationResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "iter,best_fitness\n";
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        out << (i + 1) << ',' << format_sig(result.trace[i], 9) << '\n';
    }
    if (!out) throw std::runtime_error("write failure: " + path);
}

}  // namespace plrec
