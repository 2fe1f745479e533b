#include "ocwc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include "ocwc/errors.hpp"
#include "ocwc/pcwc.hpp"

namespace ocwc::bench {

namespace {

using nlohmann::ordered_json;

std::uint64_t cell_seed(std::uint64_t seed, std::size_t k, std::size_t n) {
  // splitmix64 finaliser over the cell coordinates
  std::uint64_t z = seed ^ (std::uint64_t{k} << 32) ^ std::uint64_t{n};
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::size_t slot_budget(const BenchConfig& config) {
  if (config.memory_budget_mb == 0) return 0;
  const std::size_t per_slot = config.backend == BackendKind::Sim ? 1 : sizeof(std::uint64_t);
  return std::max<std::size_t>(1, config.memory_budget_mb * (std::size_t{1} << 20) / per_slot);
}

double log2n(std::size_t n) { return std::log2(static_cast<double>(n)); }

double model_value(Algorithm algorithm, std::size_t k, std::size_t n) {
  const double l = log2n(n);
  const double kk = static_cast<double>(k);
  const double base = static_cast<double>(n) * l * l * l;
  return algorithm == Algorithm::Naive ? kk * kk * base : kk * base;
}

std::string now_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

ordered_json gates_json(const obool::GateCounts& g) {
  return {{"xor", g[obool::GateKind::Xor]},
          {"and", g[obool::GateKind::And]},
          {"not", g[obool::GateKind::Not]},
          {"const", g[obool::GateKind::Const]},
          {"total", g.total()}};
}

std::string alg(Algorithm a) { return std::string(protocol::to_string(a)); }

}  // namespace

double pairwise_model_gates(std::size_t k, std::size_t n) {
  // Every feature compares every ordered row pair on a w-bit label: w-bit
  // equality (about 3w gates) plus a class XOR and an accumulating AND.
  const double w = std::max(1.0, std::ceil(log2n(n)));
  const double nn = static_cast<double>(n);
  return static_cast<double>(k) * nn * nn * (3 * w + 2);
}

const BenchCell* BenchReport::find(Algorithm algorithm, std::size_t k, std::size_t n) const {
  for (const auto& c : cells)
    if (c.algorithm == algorithm && c.k == k && c.n == n) return &c;
  return nullptr;
}

BenchCell run_cell(const BenchConfig& config, Algorithm algorithm, std::size_t k, std::size_t n) {
  BenchCell cell;
  cell.algorithm = algorithm;
  cell.k = k;
  cell.n = n;
  cell.n_pad = next_power_of_two(n);
  cell.dataset_seed = cell_seed(config.seed, k, n);

  const auto ds = protocol::gen_dataset(n, k, cell.dataset_seed, std::min<std::size_t>(2, k));
  try {
    auto be = protocol::open_ephemeral_backend(config.backend, config.seed, config.adapter_path,
                                               {.record_ops = false, .slot_limit = slot_budget(config)});
    const auto enc = pcwc::encrypt_dataset(be, pad(ds));
    const auto before = be.transcript().counts();
    const auto start = std::chrono::steady_clock::now();
    const auto mask = algorithm == Algorithm::Naive ? pcwc::naive_select(be, enc)
                                                    : pcwc::improved_select(be, enc);
    cell.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    cell.gates = be.transcript().counts() - before;
    cell.cost = config.cost.cost(cell.gates);
    cell.digest = be.transcript().digest();
    for (auto b : pcwc::decrypt_mask(be, mask)) cell.mask.push_back(b ? '1' : '0');
  } catch (const BudgetExceeded& e) {
    cell.gates = {};
    cell.wall_ms = 0;
    cell.skipped = true;
    cell.reason = e.what();
  }
  return cell;
}

Diagnostics diagnose(const std::vector<BenchCell>& cells) {
  Diagnostics d;
  auto find = [&](Algorithm a, std::size_t k, std::size_t n) -> const BenchCell* {
    for (const auto& c : cells)
      if (!c.skipped && c.algorithm == a && c.k == k && c.n == n) return &c;
    return nullptr;
  };

  for (const auto& c : cells) {
    if (c.skipped) continue;
    if (const auto* twice = find(c.algorithm, 2 * c.k, c.n))
      d.k_doubling.push_back({c.algorithm, c.n, c.k, twice->k,
                              static_cast<double>(twice->gates.total()) /
                                  static_cast<double>(c.gates.total())});
    if (c.algorithm == Algorithm::Naive)
      if (const auto* imp = find(Algorithm::Improved, c.k, c.n))
        d.naive_over_improved.push_back({c.k, c.n,
                                         static_cast<double>(c.gates.total()) /
                                             static_cast<double>(imp->gates.total())});
  }

  for (auto a : {Algorithm::Naive, Algorithm::Improved}) {
    double lo = INFINITY, hi = 0;
    std::size_t used = 0;
    for (const auto& c : cells) {
      if (c.skipped || c.algorithm != a || c.n < 2) continue;
      const double r = static_cast<double>(c.gates.total()) / model_value(a, c.k, c.n);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      ++used;
    }
    if (used == 0) continue;
    // The geometric midpoint of the extreme ratios minimises the worst-case
    // multiplicative error of a one-parameter fit.
    d.fits.push_back({a, a == Algorithm::Naive ? "k^2*n*log2(n)^3" : "k*n*log2(n)^3",
                      std::sqrt(lo * hi), std::sqrt(hi / lo), used});
  }

  for (const auto& c : cells) {
    if (c.algorithm != Algorithm::Improved) continue;
    const double model = pairwise_model_gates(c.k, c.n);
    const double over = c.skipped ? 0.0 : model / static_cast<double>(c.gates.total());
    d.pairwise_model.push_back({c.k, c.n, model, over});
  }
  return d;
}

BenchReport run_bench(const BenchConfig& config) {
  if (config.ks.empty() || config.ns.empty() || config.algorithms.empty())
    throw UsageError("bench grid is empty");
  for (auto k : config.ks)
    if (k == 0) throw UsageError("bench grid contains k = 0");
  for (auto n : config.ns)
    if (n == 0) throw UsageError("bench grid contains n = 0");

  BenchReport report;
  report.config = config;
  report.timestamp = now_utc();
  for (auto n : config.ns)
    for (auto k : config.ks)
      for (auto a : config.algorithms) report.cells.push_back(run_cell(config, a, k, n));
  report.diagnostics = diagnose(report.cells);
  return report;
}

std::string to_jsonl(const BenchReport& report) {
  const auto& cfg = report.config;
  std::ostringstream out;

  ordered_json meta;
  meta["type"] = "meta";
  meta["format"] = 1;
  meta["backend"] = std::string(protocol::to_string(cfg.backend));
  meta["seed"] = cfg.seed;
  meta["timestamp"] = report.timestamp;
  meta["grid"] = {{"k", cfg.ks}, {"n", cfg.ns}};
  std::vector<std::string> algs;
  for (auto a : cfg.algorithms) algs.push_back(alg(a));
  meta["algorithms"] = algs;
  meta["cost_table"] = {{"xor", cfg.cost.weight[0]},
                        {"and", cfg.cost.weight[1]},
                        {"not", cfg.cost.weight[2]},
                        {"const", cfg.cost.weight[3]}};
  meta["memory_budget_mb"] = cfg.memory_budget_mb;
  out << meta.dump() << '\n';

  for (const auto& c : report.cells) {
    ordered_json j;
    j["type"] = "cell";
    j["algorithm"] = alg(c.algorithm);
    j["k"] = c.k;
    j["n"] = c.n;
    j["n_pad"] = c.n_pad;
    j["dataset_seed"] = c.dataset_seed;
    j["status"] = c.skipped ? "skipped" : "ok";
    if (c.skipped) {
      j["reason"] = c.reason;
    } else {
      j["gates"] = gates_json(c.gates);
      j["cost"] = c.cost;
      j["wall_ms"] = c.wall_ms;
      j["digest"] = c.digest;
      j["mask"] = c.mask;
    }
    out << j.dump() << '\n';
  }

  const auto& d = report.diagnostics;
  ordered_json diag;
  diag["type"] = "diagnostics";
  diag["k_doubling"] = ordered_json::array();
  for (const auto& r : d.k_doubling)
    diag["k_doubling"].push_back({{"algorithm", alg(r.algorithm)},
                                  {"n", r.n},
                                  {"k_from", r.k_from},
                                  {"k_to", r.k_to},
                                  {"ratio", r.ratio}});
  diag["naive_over_improved"] = ordered_json::array();
  for (const auto& r : d.naive_over_improved)
    diag["naive_over_improved"].push_back({{"k", r.k}, {"n", r.n}, {"ratio", r.ratio}});
  diag["fits"] = ordered_json::array();
  for (const auto& f : d.fits)
    diag["fits"].push_back({{"algorithm", alg(f.algorithm)},
                            {"model", f.model},
                            {"a", f.a},
                            {"max_factor", f.max_factor},
                            {"cells", f.cells}});
  diag["pairwise_model"] = ordered_json::array();
  for (const auto& p : d.pairwise_model)
    diag["pairwise_model"].push_back(
        {{"k", p.k}, {"n", p.n}, {"gates", p.gates}, {"over_improved", p.over_improved}});
  out << diag.dump() << '\n';
  return out.str();
}

std::string to_table(const BenchReport& report) {
  std::ostringstream out;
  out << "algorithm\tk\tn\tn_pad\tstatus\txor\tand\tnot\tconst\ttotal\tcost\twall_ms\n";
  for (const auto& c : report.cells) {
    out << alg(c.algorithm) << '\t' << c.k << '\t' << c.n << '\t' << c.n_pad << '\t'
        << (c.skipped ? "skipped" : "ok");
    if (c.skipped) {
      out << "\t\t\t\t\t\t\t\n";
      continue;
    }
    out << '\t' << c.gates[obool::GateKind::Xor] << '\t' << c.gates[obool::GateKind::And] << '\t'
        << c.gates[obool::GateKind::Not] << '\t' << c.gates[obool::GateKind::Const] << '\t'
        << c.gates.total() << '\t' << c.cost << '\t' << std::fixed << std::setprecision(3)
        << c.wall_ms << std::defaultfloat << '\n';
  }
  return out.str();
}

}  // namespace ocwc::bench
