#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "pnav/agent.hpp"
#include "pnav/episode.hpp"
#include "pnav/mlp.hpp"
#include "pnav/schedule.hpp"

namespace pnav {

// ---------------------------------------------------------------------------
// Generalized advantage estimation

struct GaeResult {
    std::vector<double> advantages;
    std::vector<double> returns;
};

// values must carry one bootstrap entry beyond rewards (0 at terminals).
inline GaeResult compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                             double gamma, double lambda) {
    if (values.size() != rewards.size() + 1) {
        throw std::invalid_argument("compute_gae: values must have one bootstrap entry beyond rewards");
    }
    GaeResult out;
    out.advantages.assign(rewards.size(), 0.0);
    out.returns.assign(rewards.size(), 0.0);
    double running = 0.0;
    for (std::size_t i = rewards.size(); i-- > 0;) {
        double delta = rewards[i] + gamma * values[i + 1] - values[i];
        running = delta + gamma * lambda * running;
        out.advantages[i] = running;
        out.returns[i] = running + values[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// PPO

struct LearnerConfig {
    double gamma = 0.99;
    double gae_lambda = 0.95;
    double clip_epsilon = 0.2;
    double learning_rate = 3e-4;
    int epochs_per_update = 4;
    int rollout_episodes = 10;
    std::vector<int> hidden_sizes = {64, 64};
    double value_coef = 0.5;
    double entropy_coef = 0.01;
    bool mask_invalid = false;  // ablation only; default keeps the -1 penalty route
    std::uint64_t seed = 0;

    void validate() const {
        if (gamma <= 0.0 || gamma > 1.0) throw std::invalid_argument("learner config error: gamma in (0,1]");
        if (gae_lambda < 0.0 || gae_lambda > 1.0) throw std::invalid_argument("learner config error: lambda in [0,1]");
        if (clip_epsilon <= 0.0) throw std::invalid_argument("learner config error: clip epsilon > 0");
        if (learning_rate <= 0.0) throw std::invalid_argument("learner config error: learning rate > 0");
        if (epochs_per_update <= 0) throw std::invalid_argument("learner config error: epochs > 0");
        if (rollout_episodes <= 0) throw std::invalid_argument("learner config error: rollout episodes > 0");
    }
};

struct TrajectoryBatch {
    std::vector<std::vector<double>> observations;
    std::vector<int> actions;
    std::vector<double> rewards;
    std::vector<double> values;
    std::vector<double> log_probs;
    std::vector<double> advantages;
    std::vector<double> returns;

    std::size_t size() const { return actions.size(); }

    void validate() const {
        std::size_t n = actions.size();
        if (observations.size() != n || rewards.size() != n || values.size() != n || log_probs.size() != n ||
            advantages.size() != n || returns.size() != n) {
            throw std::invalid_argument("trajectory batch error: misaligned sequences");
        }
        for (double a : advantages) {
            if (!std::isfinite(a)) throw std::invalid_argument("trajectory batch error: non-finite advantage");
        }
    }

    void normalize_advantages() {
        if (advantages.empty()) return;
        double mean = 0.0;
        for (double a : advantages) mean += a;
        mean /= static_cast<double>(advantages.size());
        double var = 0.0;
        for (double a : advantages) var += (a - mean) * (a - mean);
        double stddev = std::sqrt(var / static_cast<double>(advantages.size()));
        if (stddev < 1e-8) stddev = 1.0;
        for (double& a : advantages) a = (a - mean) / stddev;
    }
};

// Separate policy and value networks sharing the observation encoding.
struct PolicyValueNet {
    Mlp policy;
    Mlp value;

    PolicyValueNet(int observation_size, int action_count, const std::vector<int>& hidden, std::uint64_t seed)
        : policy(make_sizes(observation_size, hidden, action_count), seed_combine({seed, fnv1a64("policy")})),
          value(make_sizes(observation_size, hidden, 1), seed_combine({seed, fnv1a64("value")})) {}

    static std::vector<int> make_sizes(int in, const std::vector<int>& hidden, int out) {
        std::vector<int> sizes = {in};
        sizes.insert(sizes.end(), hidden.begin(), hidden.end());
        sizes.push_back(out);
        return sizes;
    }

    nlohmann::ordered_json checkpoint_json(const LearnerConfig& cfg) const {
        nlohmann::ordered_json j;
        j["version"] = 1;
        j["config"] = {{"gamma", cfg.gamma},
                       {"gae_lambda", cfg.gae_lambda},
                       {"clip_epsilon", cfg.clip_epsilon},
                       {"learning_rate", cfg.learning_rate},
                       {"epochs_per_update", cfg.epochs_per_update},
                       {"rollout_episodes", cfg.rollout_episodes},
                       {"hidden_sizes", cfg.hidden_sizes},
                       {"value_coef", cfg.value_coef},
                       {"entropy_coef", cfg.entropy_coef},
                       {"seed", cfg.seed}};
        j["policy_sizes"] = policy.sizes();
        j["value_sizes"] = value.sizes();
        j["policy_params"] = policy.params();
        j["value_params"] = value.params();
        return j;
    }

    void save_checkpoint(const std::string& path, const LearnerConfig& cfg) const {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write checkpoint: " + path);
        out << checkpoint_json(cfg).dump(2) << "\n";
    }

    static PolicyValueNet load_checkpoint(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open checkpoint: " + path);
        nlohmann::json j;
        in >> j;
        if (j.at("version").get<int>() != 1) throw std::runtime_error("unsupported checkpoint version");
        auto policy_sizes = j.at("policy_sizes").get<std::vector<int>>();
        auto value_sizes = j.at("value_sizes").get<std::vector<int>>();
        std::vector<int> hidden(policy_sizes.begin() + 1, policy_sizes.end() - 1);
        PolicyValueNet net(policy_sizes.front(), policy_sizes.back(), hidden, 0);
        net.policy.params() = j.at("policy_params").get<std::vector<double>>();
        net.value.params() = j.at("value_params").get<std::vector<double>>();
        if (net.policy.params().size() !=
                Mlp(policy_sizes, 0).params().size() ||
            net.value.params().size() != Mlp(value_sizes, 0).params().size()) {
            throw std::runtime_error("checkpoint parameter count mismatch");
        }
        return net;
    }
};

struct PpoLossStats {
    double total = 0.0;
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy_bonus = 0.0;
};

// Mean clipped-surrogate loss over the batch plus analytic gradients. The
// gradients land in the provided flat vectors (zeroed here); callers that only
// need the scalar may pass nullptr. Exposed separately from ppo_update so the
// finite-difference check can probe it.
inline PpoLossStats ppo_loss(const PolicyValueNet& net, const TrajectoryBatch& batch, const LearnerConfig& cfg,
                             std::vector<double>* policy_grads, std::vector<double>* value_grads) {
    if (batch.size() == 0) throw std::invalid_argument("ppo_loss: empty batch");
    if (policy_grads) policy_grads->assign(net.policy.params().size(), 0.0);
    if (value_grads) value_grads->assign(net.value.params().size(), 0.0);

    PpoLossStats stats;
    const double inv_n = 1.0 / static_cast<double>(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        Mlp::Cache policy_cache, value_cache;
        std::vector<double> logits = net.policy.forward(batch.observations[i], &policy_cache);
        std::vector<double> probs = softmax(logits);
        int action = batch.actions[i];
        double logp = std::log(std::max(probs[static_cast<std::size_t>(action)], 1e-300));
        double ratio = std::exp(logp - batch.log_probs[i]);
        double advantage = batch.advantages[i];

        double clipped = std::clamp(ratio, 1.0 - cfg.clip_epsilon, 1.0 + cfg.clip_epsilon);
        double surrogate_unclipped = ratio * advantage;
        double surrogate_clipped = clipped * advantage;
        bool use_unclipped = surrogate_unclipped <= surrogate_clipped;
        stats.policy_loss += -std::min(surrogate_unclipped, surrogate_clipped) * inv_n;

        double h = entropy(probs);
        stats.entropy_bonus += h * inv_n;

        std::vector<double> v = net.value.forward(batch.observations[i], &value_cache);
        double value_error = v[0] - batch.returns[i];
        stats.value_loss += value_error * value_error * inv_n;

        if (policy_grads) {
            // d(-min(u1,u2))/d(logp): -A*ratio on the active branch, zero when
            // the clip saturates.
            double dloss_dlogp = 0.0;
            if (use_unclipped) {
                dloss_dlogp = -advantage * ratio;
            } else if (ratio > 1.0 - cfg.clip_epsilon && ratio < 1.0 + cfg.clip_epsilon) {
                dloss_dlogp = -advantage * ratio;
            }
            std::vector<double> logit_grad(probs.size());
            for (std::size_t j = 0; j < probs.size(); ++j) {
                double indicator = (static_cast<int>(j) == action) ? 1.0 : 0.0;
                double dlogp_dlogit = indicator - probs[j];
                double dentropy_dlogit = -probs[j] * (std::log(std::max(probs[j], 1e-300)) + h);
                logit_grad[j] = (dloss_dlogp * dlogp_dlogit - cfg.entropy_coef * dentropy_dlogit) * inv_n;
            }
            net.policy.backward(policy_cache, logit_grad, *policy_grads);
        }
        if (value_grads) {
            std::vector<double> value_grad = {cfg.value_coef * 2.0 * value_error * inv_n};
            net.value.backward(value_cache, value_grad, *value_grads);
        }
    }
    stats.total = stats.policy_loss + cfg.value_coef * stats.value_loss - cfg.entropy_coef * stats.entropy_bonus;
    return stats;
}

struct UpdateStats {
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
};

// One PPO update: cfg.epochs_per_update full-batch gradient steps on the
// clipped surrogate. Throws on a non-finite loss rather than corrupting the
// parameters.
inline UpdateStats ppo_update(PolicyValueNet& net, TrajectoryBatch& batch, const LearnerConfig& cfg,
                              AdamOptimizer& policy_opt, AdamOptimizer& value_opt) {
    batch.normalize_advantages();
    batch.validate();
    UpdateStats out;
    std::vector<double> policy_grads, value_grads;
    for (int epoch = 0; epoch < cfg.epochs_per_update; ++epoch) {
        PpoLossStats stats = ppo_loss(net, batch, cfg, &policy_grads, &value_grads);
        if (!std::isfinite(stats.total)) {
            throw std::runtime_error("ppo_update: non-finite loss (policy=" + std::to_string(stats.policy_loss) +
                                     ", value=" + std::to_string(stats.value_loss) + ")");
        }
        policy_opt.step(net.policy.params(), policy_grads);
        value_opt.step(net.value.params(), value_grads);
        out.policy_loss = stats.policy_loss;
        out.value_loss = stats.value_loss;
        out.entropy = stats.entropy_bonus;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Training loops

// Piecewise scheme schedule over episode indices: (first episode, scheme)
// pairs, sorted, first entry at episode 0.
using SchemeSchedule = std::vector<std::pair<int, Scheme>>;

inline Scheme scheme_at(const SchemeSchedule& schedule, int episode) {
    if (schedule.empty() || schedule.front().first != 0) {
        throw std::invalid_argument("scheme schedule must start at episode 0");
    }
    Scheme current = schedule.front().second;
    for (const auto& [start, scheme] : schedule) {
        if (episode >= start) current = scheme;
    }
    return current;
}

// Even split across the horizon, the shape used by the mid-training ablation.
inline SchemeSchedule phased_schedule(const std::vector<Scheme>& phases, int total_episodes) {
    SchemeSchedule out;
    if (phases.empty()) throw std::invalid_argument("phased_schedule: no phases");
    for (std::size_t i = 0; i < phases.size(); ++i) {
        out.emplace_back(static_cast<int>(i * static_cast<std::size_t>(total_episodes) / phases.size()), phases[i]);
    }
    return out;
}

struct EpisodeStat {
    int episode = 0;
    int unique_objects = 0;
    int cumulative_reward = 0;
    int nodes_visited = 0;
};

struct TrainingLog {
    std::vector<EpisodeStat> episodes;
    std::vector<UpdateStats> updates;
    std::size_t scan_size = 0;

    std::string to_csv() const {
        std::ostringstream out;
        out << "episode,unique_objects,cumulative_reward,nodes_visited_pct\n";
        for (const EpisodeStat& e : episodes) {
            double pct = scan_size ? 100.0 * e.nodes_visited / static_cast<double>(scan_size) : 0.0;
            out << e.episode << ',' << e.unique_objects << ',' << e.cumulative_reward << ',' << pct << '\n';
        }
        return out.str();
    }
};

inline std::vector<double> observation_features(const Observation& obs, int horizon) {
    std::vector<double> features;
    features.reserve(obs.adjacency.size() + 1);
    for (std::uint8_t bit : obs.adjacency) features.push_back(static_cast<double>(bit));
    features.push_back(static_cast<double>(obs.timestep) / static_cast<double>(horizon));
    return features;
}

// PPO feasibility training. A fresh schedule is built per episode under the
// scheme in force; start nodes are drawn per episode from the config seed.
// Single-threaded and deterministic.
inline TrainingLog train_ppo(const ScanGraph& scan, const PortableObjectCatalog& catalog,
                             const SchemeSchedule& schemes, ScheduleConfig schedule_cfg,
                             const LearnerConfig& cfg, int episodes, int horizon,
                             PolicyValueNet* out_net = nullptr) {
    cfg.validate();
    if (episodes < 0) throw std::invalid_argument("train_ppo: negative episode count");
    schedule_cfg.horizon = horizon;

    const int n = static_cast<int>(scan.size());
    PolicyValueNet net(n + 1, n, cfg.hidden_sizes, cfg.seed);
    AdamOptimizer policy_opt;
    AdamOptimizer value_opt;
    policy_opt.learning_rate = cfg.learning_rate;
    value_opt.learning_rate = cfg.learning_rate;
    Rng action_rng(seed_combine({cfg.seed, fnv1a64("ppo-actions")}));

    TrainingLog log;
    log.scan_size = scan.size();
    TrajectoryBatch batch;

    for (int ep = 0; ep < episodes; ++ep) {
        Scheme scheme = scheme_at(schemes, ep);
        PlacementSchedule schedule = build_schedule(scan, catalog, schedule_cfg, scheme, ep);
        EpisodeEngine engine(scan, schedule);
        Observation obs = engine.reset_random(seed_combine({cfg.seed, fnv1a64("ppo-start"), static_cast<std::uint64_t>(ep)}));

        std::vector<double> episode_rewards;
        std::vector<double> episode_values;
        int cumulative_reward = 0;

        while (!engine.done()) {
            std::vector<double> features = observation_features(obs, horizon);
            std::vector<double> logits = net.policy.forward(features);
            if (cfg.mask_invalid) {
                std::vector<char> valid(static_cast<std::size_t>(n), 0);
                for (std::size_t nb : scan.neighbor_indices(engine.current_index())) valid[nb] = 1;
                for (int j = 0; j < n; ++j) {
                    if (!valid[static_cast<std::size_t>(j)]) logits[static_cast<std::size_t>(j)] = -1e9;
                }
            }
            std::vector<double> probs = softmax(logits);
            double draw = action_rng.uniform_real();
            int action = n - 1;
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                acc += probs[static_cast<std::size_t>(j)];
                if (draw < acc) {
                    action = j;
                    break;
                }
            }
            double value = net.value.forward(features)[0];
            StepResult result = engine.step(action);

            batch.observations.push_back(std::move(features));
            batch.actions.push_back(action);
            batch.rewards.push_back(static_cast<double>(result.reward));
            batch.values.push_back(value);
            batch.log_probs.push_back(std::log(std::max(probs[static_cast<std::size_t>(action)], 1e-300)));
            episode_rewards.push_back(static_cast<double>(result.reward));
            episode_values.push_back(value);
            cumulative_reward += result.reward;
            obs = std::move(result.observation);
        }

        episode_values.push_back(0.0);  // terminal bootstrap
        GaeResult gae = compute_gae(episode_rewards, episode_values, cfg.gamma, cfg.gae_lambda);
        batch.advantages.insert(batch.advantages.end(), gae.advantages.begin(), gae.advantages.end());
        batch.returns.insert(batch.returns.end(), gae.returns.begin(), gae.returns.end());

        log.episodes.push_back({ep, static_cast<int>(engine.found().size()), cumulative_reward,
                                static_cast<int>(engine.visit_counts().size())});

        if ((ep + 1) % cfg.rollout_episodes == 0) {
            log.updates.push_back(ppo_update(net, batch, cfg, policy_opt, value_opt));
            batch = TrajectoryBatch{};
        }
    }
    if (!batch.actions.empty()) {
        log.updates.push_back(ppo_update(net, batch, cfg, policy_opt, value_opt));
    }
    if (out_net) *out_net = net;
    return log;
}

// ---------------------------------------------------------------------------
// Tabular baseline: epsilon-greedy Q-learning over (node, time-bucket) with
// actions restricted to neighbors. Fast enough to gate CI on.

struct TabularConfig {
    double gamma = 0.99;
    double alpha = 0.2;
    double epsilon_start = 1.0;
    double epsilon_end = 0.05;
    double epsilon_decay_fraction = 0.3;  // of total episodes
    int time_buckets = 6;
    std::uint64_t seed = 0;
};

inline TrainingLog tabular_q_train(const ScanGraph& scan, const PortableObjectCatalog& catalog,
                                   const SchemeSchedule& schemes, ScheduleConfig schedule_cfg,
                                   const TabularConfig& cfg, int episodes, int horizon) {
    if (episodes < 0) throw std::invalid_argument("tabular_q_train: negative episode count");
    schedule_cfg.horizon = horizon;

    const std::size_t n = scan.size();
    const int buckets = std::max(1, cfg.time_buckets);
    // Q[node * buckets + bucket][neighbor slot]
    std::vector<std::vector<double>> q(n * static_cast<std::size_t>(buckets));
    for (std::size_t node = 0; node < n; ++node) {
        for (int b = 0; b < buckets; ++b) {
            q[node * static_cast<std::size_t>(buckets) + static_cast<std::size_t>(b)].assign(
                scan.neighbor_indices(node).size(), 0.0);
        }
    }
    auto bucket_of = [&](int t) { return std::min(buckets - 1, t * buckets / std::max(1, horizon)); };

    Rng rng(seed_combine({cfg.seed, fnv1a64("tabular")}));
    TrainingLog log;
    log.scan_size = n;

    int decay_episodes = std::max(1, static_cast<int>(cfg.epsilon_decay_fraction * episodes));
    for (int ep = 0; ep < episodes; ++ep) {
        Scheme scheme = scheme_at(schemes, ep);
        PlacementSchedule schedule = build_schedule(scan, catalog, schedule_cfg, scheme, ep);
        EpisodeEngine engine(scan, schedule);
        engine.reset_random(seed_combine({cfg.seed, fnv1a64("tabular-start"), static_cast<std::uint64_t>(ep)}));

        double epsilon = cfg.epsilon_start;
        if (ep >= decay_episodes) {
            epsilon = cfg.epsilon_end;
        } else {
            epsilon = cfg.epsilon_start + (cfg.epsilon_end - cfg.epsilon_start) * ep / static_cast<double>(decay_episodes);
        }

        int cumulative_reward = 0;
        while (!engine.done()) {
            std::size_t node = engine.current_index();
            std::size_t state = node * static_cast<std::size_t>(buckets) + static_cast<std::size_t>(bucket_of(engine.t()));
            const auto& adj = scan.neighbor_indices(node);
            std::size_t slot;
            if (rng.uniform_real() < epsilon) {
                slot = rng.uniform_index(adj.size());
            } else {
                slot = 0;
                for (std::size_t k = 1; k < adj.size(); ++k) {
                    if (q[state][k] > q[state][slot]) slot = k;
                }
            }
            StepResult result = engine.step(static_cast<int>(adj[slot]));
            cumulative_reward += result.reward;

            double target = static_cast<double>(result.reward);
            if (!result.done) {
                std::size_t next_state = engine.current_index() * static_cast<std::size_t>(buckets) +
                                         static_cast<std::size_t>(bucket_of(engine.t()));
                double best_next = q[next_state].empty() ? 0.0 : *std::max_element(q[next_state].begin(), q[next_state].end());
                target += cfg.gamma * best_next;
            }
            q[state][slot] += cfg.alpha * (target - q[state][slot]);
        }
        log.episodes.push_back({ep, static_cast<int>(engine.found().size()), cumulative_reward,
                                static_cast<int>(engine.visit_counts().size())});
    }
    return log;
}

}  // namespace pnav
