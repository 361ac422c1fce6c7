#include "hflopt/hfl_sim.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace hflopt {

namespace {

double norm(const WeightVector& w) {
    double s = 0;
    for (double v : w) s += v * v;
    return std::sqrt(s);
}

WeightVector weighted_average(const std::vector<WeightVector>& weights,
                              const std::vector<double>& sizes) {
    if (weights.empty()) throw std::invalid_argument("nothing to aggregate");
    if (weights.size() != sizes.size())
        throw std::invalid_argument("weights / sizes length mismatch");
    const std::size_t dim = weights.front().size();
    double total = 0;
    for (double s : sizes) {
        if (s <= 0) throw std::invalid_argument("aggregation sizes must be > 0");
        total += s;
    }
    WeightVector out(dim, 0.0);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i].size() != dim) throw std::invalid_argument("dimension mismatch");
        for (std::size_t d = 0; d < dim; ++d) out[d] += sizes[i] * weights[i][d];
    }
    for (double& v : out) v /= total;
    return out;
}

}  // namespace

double SyntheticTask::loss(const WeightVector& w) const {
    double sum = 0;
    for (std::size_t r = 0; r < features.size(); ++r) {
        double pred = 0;
        for (std::size_t d = 0; d < w.size(); ++d) pred += features[r][d] * w[d];
        double err = pred - targets[r];
        sum += err * err;
    }
    return sum / (2.0 * static_cast<double>(features.size()));
}

WeightVector SyntheticTask::gradient(const WeightVector& w) const {
    WeightVector g(w.size(), 0.0);
    for (std::size_t r = 0; r < features.size(); ++r) {
        double pred = 0;
        for (std::size_t d = 0; d < w.size(); ++d) pred += features[r][d] * w[d];
        double err = pred - targets[r];
        for (std::size_t d = 0; d < w.size(); ++d) g[d] += err * features[r][d];
    }
    for (double& v : g) v /= static_cast<double>(features.size());
    return g;
}

std::vector<SyntheticTask> make_synthetic_tasks(std::uint64_t seed,
                                                const std::vector<int>& samples, int dim,
                                                double noise_std) {
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    if (noise_std < 0) throw std::invalid_argument("noise_std must be >= 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    WeightVector truth(static_cast<std::size_t>(dim));
    for (double& v : truth) v = gauss(rng);

    std::vector<SyntheticTask> tasks;
    tasks.reserve(samples.size());
    double feature_scale = 1.0 / std::sqrt(static_cast<double>(dim));
    for (int count : samples) {
        if (count < 1) throw std::invalid_argument("sample counts must be >= 1");
        SyntheticTask t;
        t.features.assign(static_cast<std::size_t>(count),
                          std::vector<double>(static_cast<std::size_t>(dim)));
        t.targets.resize(static_cast<std::size_t>(count));
        for (int r = 0; r < count; ++r) {
            double pred = 0;
            for (int d = 0; d < dim; ++d) {
                double x = gauss(rng) * feature_scale;
                t.features[static_cast<std::size_t>(r)][static_cast<std::size_t>(d)] = x;
                pred += x * truth[static_cast<std::size_t>(d)];
            }
            t.targets[static_cast<std::size_t>(r)] = pred + noise_std * gauss(rng);
        }
        tasks.push_back(std::move(t));
    }
    return tasks;
}

WeightVector local_update(const WeightVector& w, const SyntheticTask& task, int steps,
                          double learning_rate) {
    if (learning_rate <= 0) throw std::invalid_argument("learning rate must be > 0");
    if (steps < 0) throw std::invalid_argument("steps must be >= 0");
    const double start_norm = std::max(norm(w), 1.0);
    WeightVector cur = w;
    for (int i = 0; i < steps; ++i) {
        WeightVector g = task.gradient(cur);
        for (std::size_t d = 0; d < cur.size(); ++d) cur[d] -= learning_rate * g[d];
        double n = norm(cur);
        if (!std::isfinite(n) || n > 1e6 * start_norm)
            throw std::runtime_error("local training diverged");
    }
    return cur;
}

WeightVector edge_aggregate(const std::vector<WeightVector>& weights,
                            const std::vector<double>& sizes) {
    return weighted_average(weights, sizes);
}

WeightVector global_aggregate(const std::vector<WeightVector>& edge_weights,
                              const std::vector<double>& group_sizes) {
    return weighted_average(edge_weights, group_sizes);
}

double dataset_loss(const std::vector<SyntheticTask>& tasks, const WeightVector& w) {
    double weighted = 0, total = 0;
    for (const auto& t : tasks) {
        double count = static_cast<double>(t.sample_count());
        weighted += count * t.loss(w);
        total += count;
    }
    return weighted / total;
}

HflRun run_hfl(const std::vector<SyntheticTask>& tasks, const Assignment& assignment,
               int global_iters, int edge_iters, int local_iters, double learning_rate,
               const WeightVector& init) {
    assignment.validate(static_cast<int>(tasks.size()));
    if (global_iters < 1 || edge_iters < 1 || local_iters < 1)
        throw std::invalid_argument("iteration counts must be >= 1");

    HflRun run;
    WeightVector global = init;
    for (int i = 0; i < global_iters; ++i) {
        // every user starts the global round from the current global model
        std::vector<WeightVector> edge_models(assignment.groups.size());
        std::vector<double> group_sizes(assignment.groups.size(), 0.0);
        std::vector<std::size_t> active;
        for (std::size_t m = 0; m < assignment.groups.size(); ++m) {
            if (assignment.groups[m].empty()) continue;
            active.push_back(m);
            edge_models[m] = global;
            for (int n : assignment.groups[m])
                group_sizes[m] +=
                    static_cast<double>(tasks[static_cast<std::size_t>(n)].sample_count());
        }
        for (int k = 0; k < edge_iters; ++k) {
            for (std::size_t m : active) {
                std::vector<WeightVector> locals;
                std::vector<double> sizes;
                for (int n : assignment.groups[m]) {
                    const auto& task = tasks[static_cast<std::size_t>(n)];
                    locals.push_back(
                        local_update(edge_models[m], task, local_iters, learning_rate));
                    sizes.push_back(static_cast<double>(task.sample_count()));
                }
                edge_models[m] = edge_aggregate(locals, sizes);
            }
        }
        std::vector<WeightVector> uploads;
        std::vector<double> upload_sizes;
        for (std::size_t m : active) {
            uploads.push_back(edge_models[m]);
            upload_sizes.push_back(group_sizes[m]);
        }
        global = global_aggregate(uploads, upload_sizes);
        run.loss_per_global_iter.push_back(dataset_loss(tasks, global));
    }
    run.final_weights = global;
    return run;
}

}  // namespace hflopt
