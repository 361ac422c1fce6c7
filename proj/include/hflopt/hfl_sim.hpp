#pragma once

#include <cstdint>
#include <vector>

#include "hflopt/scenario.hpp"

namespace hflopt {

using WeightVector = std::vector<double>;

// Least-squares task of one user: F(w) = ||X w - y||^2 / (2 D).
struct SyntheticTask {
    std::vector<std::vector<double>> features;  // D rows of dim columns
    std::vector<double> targets;

    std::size_t sample_count() const { return targets.size(); }
    double loss(const WeightVector& w) const;
    WeightVector gradient(const WeightVector& w) const;
};

// One task per entry of `samples`, sharing a hidden ground-truth weight
// vector plus Gaussian label noise. Deterministic in the seed.
std::vector<SyntheticTask> make_synthetic_tasks(std::uint64_t seed,
                                                const std::vector<int>& samples, int dim,
                                                double noise_std);

// `steps` full-batch gradient descent steps. Throws std::runtime_error when
// the iterate norm grows by more than 1e6x (divergence).
WeightVector local_update(const WeightVector& w, const SyntheticTask& task, int steps,
                          double learning_rate);

// Sample-count weighted average of model weights.
WeightVector edge_aggregate(const std::vector<WeightVector>& weights,
                            const std::vector<double>& sizes);

// Group-size weighted average of edge models; same combiner as
// edge_aggregate, one tier up.
WeightVector global_aggregate(const std::vector<WeightVector>& edge_weights,
                              const std::vector<double>& group_sizes);

// Pooled loss over all tasks, weighted by sample counts.
double dataset_loss(const std::vector<SyntheticTask>& tasks, const WeightVector& w);

struct HflRun {
    std::vector<double> loss_per_global_iter;  // recorded after each global aggregation
    WeightVector final_weights;
};

// Hierarchical training: per global iteration, every edge runs K rounds of
// (L local steps, weighted edge average), then the cloud averages the edge
// models by group size.
HflRun run_hfl(const std::vector<SyntheticTask>& tasks, const Assignment& assignment,
               int global_iters, int edge_iters, int local_iters, double learning_rate,
               const WeightVector& init);

}  // namespace hflopt
