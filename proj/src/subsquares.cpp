#include "subsq/subsquares.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <exception>
#include <limits>
#include <memory>
#include <set>
#include <thread>
#include <utility>

namespace subsq {

namespace {

void check_shape(int m, int n, int overlap) {
  if (n < 1 || m < n) throw Error(ErrorCode::ShapeMismatch, "need m >= n >= 1");
  if (overlap < 0 || overlap >= n) {
    throw Error(ErrorCode::InvalidOverlap,
                "overlap " + std::to_string(overlap) + " outside [0, " + std::to_string(n) + ")");
  }
}

void check_system(const IMatrix& a, const IVector& b) {
  if (a.rows() != b.size()) throw Error(ErrorCode::ShapeMismatch, "A and b row counts differ");
  if (a.cols() < 1 || a.rows() < a.cols()) throw Error(ErrorCode::ShapeMismatch, "need m >= n >= 1");
}

// k distinct random elements of `pool`, in draw order.
std::vector<int> randsel(int k, const std::vector<int>& pool, Rng& rng) {
  std::vector<int> v = pool;
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(i), v.size() - 1);
    std::swap(v[static_cast<std::size_t>(i)], v[pick(rng)]);
  }
  v.resize(static_cast<std::size_t>(k));
  return v;
}

std::vector<int> erase_all(const std::vector<int>& from, const std::vector<int>& remove) {
  std::vector<int> out;
  for (int x : from) {
    if (std::find(remove.begin(), remove.end(), x) == remove.end()) out.push_back(x);
  }
  return out;
}

}  // namespace

int count_subsquares(int m, int n, int overlap) {
  check_shape(m, n, overlap);
  const int step = n - overlap;
  return 1 + (m - n + step - 1) / step;
}

int default_overlap(int n) {
  return std::min(std::max(1, n / 3), std::max(0, n - 1));
}

SubsquareSelection choose_subsquares(int m, int n, int overlap, Rng& rng) {
  check_shape(m, n, overlap);
  SubsquareSelection sel;
  sel.overlap = overlap;
  std::vector<int> covered;
  std::vector<int> waiting(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) waiting[static_cast<std::size_t>(i)] = i;

  while (!waiting.empty()) {
    std::vector<int> indices;
    const int n_waiting = static_cast<int>(waiting.size());
    if (covered.empty()) {
      indices = randsel(n, waiting, rng);
    } else if (n_waiting <= n - overlap) {
      // Pad from covered rows; drawing from waiting would repeat rows.
      indices = waiting;
      const auto pad = randsel(n - n_waiting, covered, rng);
      indices.insert(indices.end(), pad.begin(), pad.end());
    } else {
      indices = randsel(overlap, covered, rng);
      const auto fresh = randsel(n - overlap, waiting, rng);
      indices.insert(indices.end(), fresh.begin(), fresh.end());
    }
    std::sort(indices.begin(), indices.end());
    waiting = erase_all(waiting, indices);
    for (int r : indices) {
      if (std::find(covered.begin(), covered.end(), r) == covered.end()) covered.push_back(r);
    }
    std::sort(covered.begin(), covered.end());
    sel.sets.push_back(std::move(indices));
  }
  return sel;
}

std::uint64_t binomial(int m, int n) {
  if (n < 0 || n > m) return 0;
  n = std::min(n, m - n);
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  std::uint64_t r = 1;
  for (int i = 1; i <= n; ++i) {
    const auto num = static_cast<std::uint64_t>(m - n + i);
    // r * num / i stays exact because r * num is divisible by i.
    if (r > kMax / num) return kMax;
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

IMatrix select_rows(const IMatrix& a, const std::vector<int>& rows) {
  IMatrix s(static_cast<Eigen::Index>(rows.size()), a.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) s.row(static_cast<Eigen::Index>(k)) = a.row(rows[k]);
  return s;
}

IVector select_rows(const IVector& b, const std::vector<int>& rows) {
  IVector s(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) s[static_cast<Eigen::Index>(k)] = b[rows[k]];
  return s;
}

Budget default_budget(int m, int n, int overlap, std::uint64_t cap) {
  if (binomial(m, n) <= cap) return Budget::all();
  return Budget::random(3 * count_subsquares(m, n, overlap));
}

namespace {

std::vector<std::vector<int>> all_combinations(int m, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = i;
  for (;;) {
    out.push_back(c);
    int i = n - 1;
    while (i >= 0 && c[static_cast<std::size_t>(i)] == m - n + i) --i;
    if (i < 0) break;
    ++c[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) c[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

}  // namespace

std::vector<std::vector<int>> draw_subsquares(int m, int n, const Budget& budget, std::uint64_t cap,
                                              Rng& rng) {
  const std::uint64_t total = binomial(m, n);
  if (budget.kind == Budget::Kind::AllSubsquares) {
    if (total > cap) {
      throw Error(ErrorCode::BudgetExceeded,
                  "C(" + std::to_string(m) + "," + std::to_string(n) + ") exceeds " + std::to_string(cap));
    }
    auto combos = all_combinations(m, n);
    std::shuffle(combos.begin(), combos.end(), rng);
    return combos;
  }
  if (budget.k < 1) throw Error(ErrorCode::BudgetExceeded, "random budget must be positive");
  const auto k = static_cast<std::uint64_t>(budget.k);
  if (total <= cap && 2 * k >= total) {
    auto combos = all_combinations(m, n);
    std::shuffle(combos.begin(), combos.end(), rng);
    combos.resize(static_cast<std::size_t>(std::min(k, total)));
    return combos;
  }
  std::vector<int> rows(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) rows[static_cast<std::size_t>(i)] = i;
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> out;
  while (out.size() < k) {
    auto s = randsel(n, rows, rng);
    std::sort(s.begin(), s.end());
    if (seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

SolveOutcome simple_solve(const IMatrix& a, const IVector& b, const Budget& budget,
                          const SimpleOptions& opts, Rng& rng) {
  check_system(a, b);
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  SolveOutcome out;
  out.box = opts.x0 ? *opts.x0 : entire_vector<double>(n);
  if (out.box.size() != n) throw Error(ErrorCode::ShapeMismatch, "x0 has the wrong length");

  bool any_enclosure = false;
  for (const auto& rows : draw_subsquares(m, n, budget, opts.all_cap, rng)) {
    ++out.subsquares_used;
    const SquareOutcome sq = solve_square(select_rows(a, rows), select_rows(b, rows), opts.square);
    out.iterations += sq.iterations;
    if (sq.status == Status::Inconclusive) {
      ++out.inconclusive_subsquares;
      continue;
    }
    any_enclosure = true;
    out.box = sq.status == Status::ProvenUnsolvable ? empty_vector<double>(n) : intersect(out.box, sq.box);
    if (is_empty(out.box)) {
      out.status = Status::ProvenUnsolvable;
      return out;
    }
  }
  out.status = any_enclosure || opts.x0 ? Status::Enclosure : Status::Inconclusive;
  if (!any_enclosure) out.reason = "every subsquare was inconclusive";
  return out;
}

namespace {

struct Prepared {
  std::vector<PreconditionedSystem> systems;
  int dropped = 0;
  IVector x;
};

// Shared by the sequential and parallel solvers so both consume the random
// stream identically.
Prepared prepare(const IMatrix& a, const IVector& b, const std::optional<IVector>& x0,
                 const SequentialOptions& opts, Rng& rng) {
  check_system(a, b);
  const int m = static_cast<int>(a.rows());
  const int n = static_cast<int>(a.cols());
  if (x0 && x0->size() != n) throw Error(ErrorCode::ShapeMismatch, "x0 has the wrong length");

  Prepared prep;
  for (auto& rows : choose_subsquares(m, n, opts.overlap, rng).sets) {
    try {
      auto sa = select_rows(a, rows);
      auto sb = select_rows(b, rows);
      prep.systems.push_back(precondition(sa, sb, std::move(rows)));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::SingularMidpoint) throw;
      ++prep.dropped;
    }
  }

  if (x0) {
    prep.x = *x0;
    return prep;
  }
  for (const auto& p : prep.systems) {
    try {
      prep.x = initial_enclosure(p);
      return prep;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotContracting) throw;
    }
  }
  throw Error(ErrorCode::AllSubsquaresInconclusive, "no subsquare yields an initial enclosure");
}

}  // namespace

SolveOutcome sequential_solve(const IMatrix& a, const IVector& b, const std::optional<IVector>& x0,
                              const SequentialOptions& opts, Rng& rng) {
  Prepared prep = prepare(a, b, x0, opts, rng);
  SolveOutcome out;
  out.inconclusive_subsquares = prep.dropped;
  IVector x = std::move(prep.x);
  std::vector<bool> active(prep.systems.size(), true);
  std::size_t n_active = prep.systems.size();

  while (n_active > 0 && out.iterations < opts.max_iter && !is_empty(x)) {
    const IVector before = x;
    for (std::size_t k = 0; k < prep.systems.size() && !is_empty(x); ++k) {
      if (!active[k]) continue;
      try {
        x = sweep(prep.systems[k], x, opts.sweep);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DiagonalContainsZero) throw;
        active[k] = false;
        --n_active;
        ++out.inconclusive_subsquares;
      }
    }
    ++out.iterations;
    if (has_converged(before, x, opts.eps)) break;
  }

  out.subsquares_used = static_cast<int>(n_active);
  out.box = std::move(x);
  if (is_empty(out.box)) {
    out.status = Status::ProvenUnsolvable;
  } else if (n_active == 0) {
    out.status = Status::Inconclusive;
    out.reason = "every subsquare was inconclusive";
  } else {
    out.status = Status::Enclosure;
  }
  return out;
}

namespace {

struct Bounds {
  double lo;
  double hi;
};

// Box shared between workers. Components are replaced atomically and only
// ever by subsets of themselves, so every snapshot still encloses the
// solution set.
class SharedBox {
 public:
  explicit SharedBox(const IVector& x) : n_(x.size()), cells_(new std::atomic<Bounds>[static_cast<std::size_t>(x.size())]) {
    for (Eigen::Index i = 0; i < n_; ++i) cells_[static_cast<std::size_t>(i)].store({x[i].lo(), x[i].hi()});
  }

  IVector snapshot() const {
    if (empty_.load()) return empty_vector<double>(n_);
    IVector x(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      const Bounds v = cells_[static_cast<std::size_t>(i)].load();
      x[i] = Ival(v.lo, v.hi);
    }
    return x;
  }

  void improve(Eigen::Index i, const Ival& proposed) {
    auto& cell = cells_[static_cast<std::size_t>(i)];
    Bounds cur = cell.load();
    for (;;) {
      const Ival next = intersect(Ival(cur.lo, cur.hi), proposed);
      if (next.is_empty()) {
        empty_.store(true);
        return;
      }
      if (next.lo() == cur.lo && next.hi() == cur.hi) return;
      if (cell.compare_exchange_weak(cur, Bounds{next.lo(), next.hi()})) return;
    }
  }

  void mark_empty() { empty_.store(true); }
  bool empty() const { return empty_.load(); }

 private:
  Eigen::Index n_;
  std::unique_ptr<std::atomic<Bounds>[]> cells_;
  std::atomic<bool> empty_{false};
};

}  // namespace

SolveOutcome parallel_sequential_solve(const IMatrix& a, const IVector& b,
                                       const std::optional<IVector>& x0,
                                       const SequentialOptions& opts, Rng& rng, int workers) {
  if (workers < 1) throw Error(ErrorCode::ShapeMismatch, "workers must be >= 1");
  Prepared prep = prepare(a, b, x0, opts, rng);
  SolveOutcome out;
  out.inconclusive_subsquares = prep.dropped;
  if (is_empty(prep.x)) {
    out.status = Status::ProvenUnsolvable;
    out.box = std::move(prep.x);
    return out;
  }

  const std::size_t k_systems = prep.systems.size();
  const auto n_workers = static_cast<std::size_t>(
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(workers), k_systems)));

  SharedBox shared(prep.x);
  std::vector<std::atomic<bool>> active(k_systems);
  for (auto& f : active) f.store(true);
  std::atomic<int> n_active{static_cast<int>(k_systems)};
  std::atomic<bool> stop{k_systems == 0};
  int rounds = 0;
  IVector previous = prep.x;
  std::exception_ptr failure;
  std::atomic<bool> failed{false};

  auto end_of_round = [&]() noexcept {
    ++rounds;
    const IVector current = shared.snapshot();
    if (shared.empty() || failed.load() || n_active.load() == 0 || rounds >= opts.max_iter ||
        has_converged(previous, current, opts.eps)) {
      stop.store(true);
    }
    previous = current;
  };
  std::barrier sync(static_cast<std::ptrdiff_t>(n_workers), end_of_round);

  auto work = [&](std::size_t w) {
    while (!stop.load()) {
      for (std::size_t k = w; k < k_systems; k += n_workers) {
        if (!active[k].load() || shared.empty() || failed.load()) continue;
        try {
          const IVector x = shared.snapshot();
          const IVector y = jacobi_sweep(prep.systems[k], x);
          if (is_empty(y)) {
            shared.mark_empty();
            continue;
          }
          for (Eigen::Index i = 0; i < y.size(); ++i) shared.improve(i, y[i]);
        } catch (const Error& e) {
          if (e.code() == ErrorCode::DiagonalContainsZero) {
            active[k].store(false);
            n_active.fetch_sub(1);
          } else if (!failed.exchange(true)) {
            failure = std::current_exception();
          }
        }
      }
      sync.arrive_and_wait();
    }
  };

  if (!stop.load()) {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(work, w);
    work(0);
  }
  if (failure) std::rethrow_exception(failure);

  out.iterations = rounds;
  out.subsquares_used = n_active.load();
  out.inconclusive_subsquares += static_cast<int>(k_systems) - n_active.load();
  out.box = shared.snapshot();
  if (is_empty(out.box)) {
    out.status = Status::ProvenUnsolvable;
  } else if (n_active.load() == 0) {
    out.status = Status::Inconclusive;
    out.reason = "every subsquare was inconclusive";
  } else {
    out.status = Status::Enclosure;
  }
  return out;
}

}  // namespace subsq
