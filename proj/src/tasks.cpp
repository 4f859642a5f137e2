#include "qls/tasks.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace qls {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

Matrix z_last_qubit(int n) {
  const long d = dim_of(n);
  Matrix z = Matrix::Zero(d, d);
  for (long i = 0; i < d; ++i) z(i, i) = (i & 1) ? -1.0 : 1.0;
  return z;
}

DensityMatrix perturbed_state(int n, double strength, const Matrix& obs) {
  const long d = dim_of(n);
  Matrix m = (Matrix::Identity(d, d) + strength * obs) / static_cast<double>(d);
  return DensityMatrix(n, std::move(m));
}

GroupElement sample_group_element(GroupKind g, long d, SeededRng& rng) {
  switch (g) {
    case GroupKind::Unitary:
      return haar_unitary(d, rng);
    case GroupKind::Orthogonal:
      return haar_orthogonal(d, rng);
    case GroupKind::Symplectic:
      return haar_symplectic(d, rng);
  }
  throw std::logic_error("unreachable");
}

int guess(const TaskSpec& task, SeededRng& rng) {
  return static_cast<int>(rng.below(task.label_count()));
}

// Returns the decision label and fills `copies` with the exact number of
// copies/queries consumed.
int run_learner(const TaskSpec& task, const TaskInstance& inst, const std::string& learner,
                long t, SeededRng& rng, long& copies) {
  copies = 0;
  if (learner == "blind") return 0;
  const int n = task.n_qubits;
  switch (task.kind) {
    case TaskKind::PauliManyVsOne: {
      const double signal = 3 * task.eps;
      if (learner == "bell") {
        const long pairs = t / 2;
        if (pairs < 1) return guess(task, rng);
        StateSource src(*inst.state);
        const auto est = bell_all_pauli_sq_estimate(src, pairs, rng);
        copies = src.copies_consumed;
        const double peak = *std::max_element(est.begin() + 1, est.end());
        return peak > signal * signal / 2 ? 1 : 0;
      }
      if (learner == "naive") {
        const long n_obs = (1L << (2 * n)) - 1;
        const long shots = t / n_obs;
        if (shots < 1) return guess(task, rng);
        std::vector<PauliString> paulis;
        for (long code = 1; code <= n_obs; ++code)
          paulis.push_back(PauliString::from_code(n, code));
        StateSource src(*inst.state);
        const auto est = naive_pauli_estimate(src, paulis, shots, rng);
        copies = src.copies_consumed;
        double peak = 0;
        for (double e : est) peak = std::max(peak, std::abs(e));
        return peak > signal / 2 ? 1 : 0;
      }
      break;
    }
    case TaskKind::RandomObsManyVsOne: {
      if (learner == "naive") {
        const long n_obs = static_cast<long>(inst.observables.size());
        const long shots = t / n_obs;
        if (shots < 1) return guess(task, rng);
        const double signal = 3 * task.eps;
        double peak = 0;
        for (const Matrix& obs : inst.observables) {
          const double mean = (obs * inst.state->matrix).trace().real();
          const double p_plus = std::clamp((1.0 + mean) / 2.0, 0.0, 1.0);
          double sum = 0;
          for (long s = 0; s < shots; ++s) sum += rng.bernoulli(p_plus) ? 1.0 : -1.0;
          copies += shots;
          peak = std::max(peak, std::abs(sum / shots));
        }
        return peak > signal / 2 ? 1 : 0;
      }
      break;
    }
    case TaskKind::PurityManyVsOne: {
      if (learner == "memoryless") {
        if (t < 2) return guess(task, rng);
        StateSource src(*inst.state);
        const PurityVerdict v = purity_test(src, t, rng);
        copies = src.copies_consumed;
        return v == PurityVerdict::Pure ? 1 : 0;
      }
      break;
    }
    case TaskKind::ChannelFixedConj: {
      if (learner == "memoryless") {
        if (t < 2) return guess(task, rng);
        ChannelOracle oracle(*inst.channel);
        const ChannelVerdict v = channel_distinguish_memoryless(oracle, t, rng);
        copies = oracle.queries;
        return v == ChannelVerdict::FixedConjugation ? 1 : 0;
      }
      if (learner == "memory") {
        const int repeats = static_cast<int>(t / 2);
        if (repeats < 1) return guess(task, rng);
        ChannelOracle oracle(*inst.channel);
        const ChannelVerdict v = channel_distinguish_memory(oracle, repeats, rng);
        copies = oracle.queries;
        return v == ChannelVerdict::FixedConjugation ? 1 : 0;
      }
      break;
    }
    case TaskKind::SymmetryTriple: {
      if (learner == "tomography") {
        const long per_state = t / 3;
        if (per_state < 1) return guess(task, rng);
        ChannelOracle oracle(*inst.channel);
        const SymmetryClass c = symmetry_classify(oracle, per_state, rng);
        copies = oracle.queries;
        return static_cast<int>(c);
      }
      if (learner == "exact") {
        return static_cast<int>(symmetry_classify_exact(*inst.channel->conjugator, n));
      }
      break;
    }
  }
  std::string valid;
  for (const std::string& l : valid_learners(task.kind)) valid += " " + l;
  throw std::invalid_argument("unknown learner '" + learner + "' for task '" + task.name() +
                              "'; valid:" + valid);
}

}  // namespace

std::string TaskSpec::name() const {
  switch (kind) {
    case TaskKind::PauliManyVsOne:
      return "pauli";
    case TaskKind::RandomObsManyVsOne:
      return "randomobs";
    case TaskKind::PurityManyVsOne:
      return "purity";
    case TaskKind::ChannelFixedConj:
      return "channel";
    case TaskKind::SymmetryTriple:
      return "symmetry";
  }
  return "?";
}

int TaskSpec::label_count() const {
  return kind == TaskKind::SymmetryTriple ? 3 : 2;
}

std::string TaskSpec::label_name(int label) const {
  switch (kind) {
    case TaskKind::PauliManyVsOne:
    case TaskKind::RandomObsManyVsOne:
      return label == 0 ? "mm" : "planted";
    case TaskKind::PurityManyVsOne:
      return label == 0 ? "mm" : "pure";
    case TaskKind::ChannelFixedConj:
      return label == 0 ? "depolarizing" : "conjugation";
    case TaskKind::SymmetryTriple:
      return label == 0 ? "unitary" : (label == 1 ? "orthogonal" : "symplectic");
  }
  return "?";
}

void TaskSpec::validate() const {
  require(n_qubits >= 1, "TaskSpec: n_qubits must be positive");
  if (kind == TaskKind::PauliManyVsOne || kind == TaskKind::RandomObsManyVsOne)
    require(eps > 0 && eps < 1.0 / 3, "TaskSpec: eps must lie in (0, 1/3)");
  if (kind == TaskKind::RandomObsManyVsOne)
    require(m_observables >= 2 && m_observables % 2 == 0 && m_observables <= 4096,
            "TaskSpec: m_observables must be even and in [2, 4096]");
  if (kind == TaskKind::SymmetryTriple)
    require(n_qubits >= 2, "TaskSpec: symmetry task needs n_qubits >= 2");
}

TaskInstance sample_instance(const TaskSpec& task, SeededRng& rng) {
  task.validate();
  const int n = task.n_qubits;
  const long d = dim_of(n);
  TaskInstance inst;
  switch (task.kind) {
    case TaskKind::PauliManyVsOne: {
      inst.truth = rng.bernoulli(0.5) ? 1 : 0;
      if (inst.truth == 0) {
        inst.state = DensityMatrix::maximally_mixed(n);
      } else {
        const PauliString p = random_signed_pauli(n, rng);
        inst.state = perturbed_state(n, 3 * task.eps, pauli_matrix(p));
      }
      break;
    }
    case TaskKind::RandomObsManyVsOne: {
      const int half = task.m_observables / 2;
      const Matrix z = z_last_qubit(n);
      for (int i = 0; i < half; ++i) {
        const Matrix u = haar_unitary(d, rng).matrix;
        inst.observables.push_back(u * z * u.adjoint());
      }
      inst.truth = rng.bernoulli(0.5) ? 1 : 0;
      if (inst.truth == 0) {
        inst.state = DensityMatrix::maximally_mixed(n);
      } else {
        const int x = static_cast<int>(rng.below(half));
        const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        inst.state = perturbed_state(n, sign * 3 * task.eps, inst.observables[x]);
      }
      break;
    }
    case TaskKind::PurityManyVsOne: {
      inst.truth = rng.bernoulli(0.5) ? 1 : 0;
      inst.state = inst.truth == 0 ? DensityMatrix::maximally_mixed(n)
                                   : DensityMatrix::from_pure(haar_pure_state(n, rng));
      break;
    }
    case TaskKind::ChannelFixedConj: {
      inst.truth = rng.bernoulli(0.5) ? 1 : 0;
      inst.channel = inst.truth == 0
                         ? ChannelSpec::depolarizing(n)
                         : ChannelSpec::conjugation(
                               n, sample_group_element(task.group, d, rng).matrix);
      break;
    }
    case TaskKind::SymmetryTriple: {
      inst.truth = static_cast<int>(rng.below(3));
      const GroupKind g = inst.truth == 0
                              ? GroupKind::Unitary
                              : (inst.truth == 1 ? GroupKind::Orthogonal : GroupKind::Symplectic);
      inst.channel = ChannelSpec::conjugation(n, sample_group_element(g, d, rng).matrix);
      break;
    }
  }
  return inst;
}

std::vector<std::string> valid_learners(TaskKind kind) {
  switch (kind) {
    case TaskKind::PauliManyVsOne:
      return {"bell", "naive", "blind"};
    case TaskKind::RandomObsManyVsOne:
      return {"naive", "blind"};
    case TaskKind::PurityManyVsOne:
      return {"memoryless", "blind"};
    case TaskKind::ChannelFixedConj:
      return {"memoryless", "memory", "blind"};
    case TaskKind::SymmetryTriple:
      return {"tomography", "exact", "blind"};
  }
  return {};
}

std::pair<double, double> wilson_interval(int successes, int trials) {
  require(trials >= 1 && successes >= 0 && successes <= trials, "wilson_interval: bad counts");
  const double z = 1.959963984540054;
  const double nn = trials, p = successes / nn, z2 = z * z;
  const double denom = 1 + z2 / nn;
  const double center = (p + z2 / (2 * nn)) / denom;
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

RunResult run_trials(const TaskSpec& task, const std::string& learner, long t, int trials,
                     std::uint64_t root_seed, int jobs) {
  task.validate();
  require(trials >= 1, "run_trials: trials must be positive");
  require(t >= 0, "run_trials: budget must be nonnegative");
  {
    const auto valid = valid_learners(task.kind);
    if (std::find(valid.begin(), valid.end(), learner) == valid.end()) {
      std::string list;
      for (const std::string& l : valid) list += " " + l;
      throw std::invalid_argument("unknown learner '" + learner + "' for task '" + task.name() +
                                  "'; valid:" + list);
    }
  }

  std::vector<TrialRecord> records(trials);
  const int hw = static_cast<int>(std::thread::hardware_concurrency());
  const int n_threads = std::max(1, std::min(trials, jobs > 0 ? jobs : (hw > 0 ? hw : 1)));
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::string error_message;
  std::mutex error_mutex;

  auto worker = [&]() {
    while (!failed.load()) {
      const int trial = next.fetch_add(1);
      if (trial >= trials) break;
      try {
        SeededRng rng(root_seed, static_cast<std::uint64_t>(trial));
        const TaskInstance inst = sample_instance(task, rng);
        long copies = 0;
        const int decision = run_learner(task, inst, learner, t, rng, copies);
        if (copies > t) throw std::logic_error("learner exceeded its copy budget");
        records[trial] = {trial, inst.truth, decision, copies};
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        failed.store(true);
        if (error_message.empty()) error_message = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (std::thread& th : pool) th.join();
  if (failed.load()) throw std::runtime_error("run_trials: " + error_message);

  RunResult res;
  res.task = task.name();
  res.learner = learner;
  res.n = task.n_qubits;
  res.t = t;
  res.trials = trials;
  res.seed = root_seed;
  for (const TrialRecord& r : records) {
    res.successes += r.truth == r.decision;
    res.copies = std::max(res.copies, r.copies);
  }
  res.rate = static_cast<double>(res.successes) / trials;
  std::tie(res.ci_lo, res.ci_hi) = wilson_interval(res.successes, trials);
  res.records = std::move(records);
  return res;
}

std::vector<RunResult> sweep(const TaskSpec& task, const std::string& learner,
                             const std::vector<long>& budgets, int trials,
                             std::uint64_t root_seed, int jobs) {
  require(!budgets.empty(), "sweep: empty budget list");
  for (std::size_t i = 1; i < budgets.size(); ++i)
    require(budgets[i] > budgets[i - 1], "sweep: budgets must be strictly increasing");
  std::vector<RunResult> out;
  for (long t : budgets) out.push_back(run_trials(task, learner, t, trials, root_seed, jobs));
  return out;
}

std::pair<double, double> random_obs_diagnostic(int n, int m, int n_states, SeededRng& rng) {
  require(m >= 2 && m % 2 == 0, "random_obs_diagnostic: m must be even and >= 2");
  require(n_states >= 1, "random_obs_diagnostic: need at least one state");
  const long d = dim_of(n);
  const Matrix z = z_last_qubit(n);
  std::vector<Matrix> obs;
  for (int i = 0; i < m / 2; ++i) {
    const Matrix u = haar_unitary(d, rng).matrix;
    obs.push_back(u * z * u.adjoint());
  }
  double acc = 0;
  for (int s = 0; s < n_states; ++s) {
    const PureState phi = haar_pure_state(n, rng);
    double sum = 0;
    for (const Matrix& o : obs) {
      const double v = (phi.amplitudes.adjoint() * o * phi.amplitudes).value().real();
      sum += 2 * v * v;  // each base observable counts for O and -O
    }
    acc += sum / m;
  }
  return {acc / n_states, 1.0 / (d + 1)};
}

}  // namespace qls
