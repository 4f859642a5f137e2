#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qls/protocols.hpp"

namespace qls {

enum class TaskKind {
  PauliManyVsOne,
  RandomObsManyVsOne,
  PurityManyVsOne,
  ChannelFixedConj,
  SymmetryTriple,
};

struct TaskSpec {
  TaskKind kind = TaskKind::PurityManyVsOne;
  int n_qubits = 2;
  double eps = 0.3;                      // PauliManyVsOne, RandomObsManyVsOne
  int m_observables = 64;                // RandomObsManyVsOne, even, <= 4096
  GroupKind group = GroupKind::Unitary;  // ChannelFixedConj

  std::string name() const;
  int label_count() const;
  std::string label_name(int label) const;
  void validate() const;
};

// A sampled hidden instance with its ground-truth label. State tasks fill
// `state`; channel tasks fill `channel`. RandomObsManyVsOne also carries its
// fresh observable family (the M/2 base observables; the other half are their
// negations).
struct TaskInstance {
  int truth = 0;
  std::optional<DensityMatrix> state;
  std::optional<ChannelSpec> channel;
  std::vector<Matrix> observables;
};

TaskInstance sample_instance(const TaskSpec& task, SeededRng& rng);

// Learner ids valid for a task kind; unknown pairings are rejected with a
// message listing these.
std::vector<std::string> valid_learners(TaskKind kind);

struct TrialRecord {
  int trial = 0;
  int truth = 0;
  int decision = 0;
  long copies = 0;
};

struct RunResult {
  std::string task;
  std::string learner;
  int n = 0;
  long t = 0;
  int trials = 0;
  int successes = 0;
  double rate = 0, ci_lo = 0, ci_hi = 0;
  long copies = 0;  // per-trial copies/queries consumed (identical trials)
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;
};

// Wilson 95% score interval.
std::pair<double, double> wilson_interval(int successes, int trials);

// Monte Carlo harness: per trial draws a fresh instance and a fresh rng
// stream, runs the learner within budget t, and scores the decision. Trials
// run in parallel across `jobs` threads (0 = hardware default) with results
// merged in trial order.
RunResult run_trials(const TaskSpec& task, const std::string& learner, long t, int trials,
                     std::uint64_t root_seed, int jobs = 0);

// One run per budget, increasing.
std::vector<RunResult> sweep(const TaskSpec& task, const std::string& learner,
                             const std::vector<long>& budgets, int trials,
                             std::uint64_t root_seed, int jobs = 0);

// Sampled-state average of (1/M) sum_i <phi|O_i|phi>^2 for a fresh random
// observable family, with the 1/(2^n+1) reference value; diagnostic only.
std::pair<double, double> random_obs_diagnostic(int n, int m, int n_states, SeededRng& rng);

}  // namespace qls
