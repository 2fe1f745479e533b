#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "CLI11.hpp"
#include "ocwc/bench.hpp"
#include "ocwc/errors.hpp"
#include "ocwc/protocol.hpp"

namespace ocwc::cli {

namespace {

namespace fs = std::filesystem;
using protocol::Algorithm;
using protocol::BackendKind;

struct Common {
  std::string backend = "sim";
  std::string adapter;
  std::string keys = "keys";
};

void add_backend(CLI::App* cmd, Common& c) {
  cmd->add_option("--backend", c.backend, "sim or fhe")->check(CLI::IsMember({"sim", "fhe"}));
  cmd->add_option("--adapter", c.adapter, "FHE adapter shared library");
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DataError("cannot write " + path);
  f << text;
  if (!f) throw DataError("write failed for " + path);
}

std::string mask_string(const std::vector<std::uint8_t>& mask) {
  std::string s;
  for (auto b : mask) s.push_back(b ? '1' : '0');
  return s;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Oblivious consistency-based feature selection", "ocwc"};
  app.require_subcommand(1);
  Common common;
  std::uint64_t seed = 1;

  auto* keygen = app.add_subcommand("keygen", "generate a key pair");
  add_backend(keygen, common);
  std::string key_out;
  keygen->add_option("--out", key_out, "key directory")->required();
  keygen->add_option("--seed", seed);

  auto* encrypt = app.add_subcommand("encrypt", "data owner: CSV -> encrypted dataset");
  add_backend(encrypt, common);
  std::string enc_in, enc_out;
  encrypt->add_option("--keys", common.keys, "key directory");
  encrypt->add_option("--in", enc_in, "dataset CSV")->required();
  encrypt->add_option("--out", enc_out, "encrypted dataset file")->required();

  auto* select = app.add_subcommand("select", "analyst: encrypted dataset -> encrypted mask");
  add_backend(select, common);
  std::string sel_in, sel_out, algorithm = "improved";
  select->add_option("--keys", common.keys, "key directory");
  select->add_option("--in", sel_in, "encrypted dataset file")->required();
  select->add_option("--out", sel_out, "encrypted mask file")->required();
  select->add_option("--algorithm", algorithm)->check(CLI::IsMember({"naive", "improved"}));

  auto* decrypt = app.add_subcommand("decrypt", "data owner: encrypted mask -> selected features");
  add_backend(decrypt, common);
  std::string dec_in, dec_out, dec_dataset;
  decrypt->add_option("--keys", common.keys, "key directory");
  decrypt->add_option("--in", dec_in, "encrypted mask file")->required();
  decrypt->add_option("--dataset", dec_dataset, "original CSV, for feature names");
  decrypt->add_option("--out", dec_out, "write the result here instead of stdout");

  auto* gen = app.add_subcommand("gen-dataset", "write a reproducible random dataset");
  std::size_t gen_n = 0, gen_k = 0;
  std::optional<std::size_t> planted;
  std::string gen_out;
  gen->add_option("--n", gen_n, "rows")->required()->check(CLI::PositiveNumber);
  gen->add_option("--k", gen_k, "features")->required()->check(CLI::PositiveNumber);
  gen->add_option("--seed", seed);
  gen->add_option("--planted", planted, "class = XOR of this many random features");
  gen->add_option("--out", gen_out, "CSV path (default stdout)");

  auto* bench = app.add_subcommand("bench", "gate-count benchmark over a (k, n) grid");
  bench::BenchConfig config;
  std::vector<std::string> bench_algs{"naive", "improved"};
  std::string bench_out, table_out, cost_table;
  add_backend(bench, common);
  bench->add_option("--k", config.ks, "feature counts")->delimiter(',');
  bench->add_option("--n", config.ns, "row counts")->delimiter(',');
  bench->add_option("--algorithm", bench_algs)
      ->delimiter(',')
      ->check(CLI::IsMember({"naive", "improved"}));
  bench->add_option("--seed", seed);
  bench->add_option("--out", bench_out, "JSONL report (default stdout)");
  bench->add_option("--table", table_out, "also write a tab-separated table");
  bench->add_option("--cost-table", cost_table, "per-gate weights, kind=value lines");
  bench->add_option("--memory-budget-mb", config.memory_budget_mb, "0 = unlimited");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return kExitOk;
    err << "ocwc: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    const auto kind = protocol::parse_backend_kind(common.backend);
    const protocol::KeyFiles keys{common.keys};

    if (*keygen) {
      protocol::keygen(kind, key_out, seed, common.adapter);
      out << "wrote " << (fs::path(key_out) / "secret.key").string() << " and "
          << (fs::path(key_out) / "eval.key").string() << "\n";
    } else if (*encrypt) {
      const auto ds = load_csv(enc_in);
      auto owner = protocol::open_owner_backend(kind, keys, common.adapter);
      protocol::write_bytes(enc_out, protocol::encrypt_dataset_message(owner, ds));
      out << "encrypted " << ds.n() << " rows x " << ds.k() << " features -> " << enc_out << "\n";
    } else if (*select) {
      auto analyst = protocol::open_analyst_backend(kind, keys, common.adapter);
      protocol::SelectStats stats;
      const auto reply = protocol::select_message(analyst, protocol::read_bytes(sel_in),
                                                  protocol::parse_algorithm(algorithm), &stats);
      protocol::write_bytes(sel_out, reply);
      out << "algorithm " << algorithm << " k " << stats.k << " n_pad " << stats.n_pad
          << " gates " << stats.gates.total() << " digest " << stats.digest << "\n";
    } else if (*decrypt) {
      auto owner = protocol::open_owner_backend(kind, keys, common.adapter);
      const auto mask = protocol::decrypt_mask_message(owner, protocol::read_bytes(dec_in));
      std::string text = "mask: " + mask_string(mask) + "\nselected:";
      std::vector<std::string> names;
      if (!dec_dataset.empty()) {
        names = decode_selection(mask, load_csv(dec_dataset));
      } else {
        for (std::size_t j = 0; j < mask.size(); ++j)
          if (mask[j]) names.push_back("f" + std::to_string(j + 1));
      }
      for (std::size_t i = 0; i < names.size(); ++i) text += (i ? "," : " ") + names[i];
      write_text(dec_out, text + "\n", out);
    } else if (*gen) {
      const auto ds = protocol::gen_dataset(gen_n, gen_k, seed, planted);
      write_text(gen_out, to_csv(ds), out);
    } else if (*bench) {
      config.backend = kind;
      config.seed = seed;
      config.adapter_path = common.adapter;
      config.algorithms.clear();
      for (const auto& a : bench_algs) config.algorithms.push_back(protocol::parse_algorithm(a));
      if (!cost_table.empty()) config.cost = obool::CostTable::load(cost_table);
      const auto report = bench::run_bench(config);
      write_text(bench_out, bench::to_jsonl(report), out);
      if (!table_out.empty()) write_text(table_out, bench::to_table(report), out);
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "ocwc: " << e.what() << "\n";
    return kExitUsage;
  } catch (const BackendError& e) {
    err << "ocwc: " << e.what() << "\n";
    return kExitBackend;
  } catch (const DataError& e) {
    err << "ocwc: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "ocwc: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace ocwc::cli
