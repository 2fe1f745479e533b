#include <fstream>
#include <sstream>
#include <system_error>

#include "ocwc/errors.hpp"
#include "ocwc/obool/external.hpp"
#include "ocwc/protocol.hpp"

namespace ocwc::protocol {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kSimSecretTag = "OCWC-SIM-SECRET 1";
constexpr std::string_view kSimEvalTag = "OCWC-SIM-EVAL 1";

std::string adapter_or_default(const std::string& path) {
  return path.empty() ? obool::AdapterLibrary::default_path() : path;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  out.close();
  if (!out) throw DataError("write failed for " + path.string());
}

std::string first_line(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw BackendError("missing key file " + path.string());
  std::string line;
  std::getline(in, line);
  return line;
}

void require_sim_key(const fs::path& path, std::string_view tag) {
  if (first_line(path) != tag)
    throw BackendError(path.string() + " is not a simulation-backend key");
}

// Temporary names live next to the targets so the final rename is atomic.
struct StagedKeys {
  fs::path secret_tmp, eval_tmp;
  bool committed = false;

  explicit StagedKeys(const KeyFiles& keys)
      : secret_tmp(keys.dir / ".secret.key.tmp"), eval_tmp(keys.dir / ".eval.key.tmp") {}
  ~StagedKeys() {
    if (committed) return;
    std::error_code ec;
    fs::remove(secret_tmp, ec);
    fs::remove(eval_tmp, ec);
  }

  void commit(const KeyFiles& keys) {
    std::error_code ec;
    fs::rename(eval_tmp, keys.eval(), ec);
    if (ec) throw DataError("cannot write " + keys.eval().string() + ": " + ec.message());
    fs::rename(secret_tmp, keys.secret(), ec);
    if (ec) {
      std::error_code ignored;
      fs::remove(keys.eval(), ignored);
      throw DataError("cannot write " + keys.secret().string() + ": " + ec.message());
    }
    committed = true;
  }
};

std::unique_ptr<obool::AdapterSession> open_session(const std::string& adapter_path) {
  auto lib = obool::AdapterLibrary::open(adapter_or_default(adapter_path));
  return std::make_unique<obool::AdapterSession>(std::move(lib));
}

}  // namespace

BackendKind parse_backend_kind(std::string_view text) {
  if (text == "sim") return BackendKind::Sim;
  if (text == "fhe") return BackendKind::Fhe;
  throw UsageError("unknown backend \"" + std::string(text) + "\" (expected sim or fhe)");
}

std::string_view to_string(BackendKind kind) {
  return kind == BackendKind::Sim ? "sim" : "fhe";
}

Algorithm parse_algorithm(std::string_view text) {
  if (text == "naive") return Algorithm::Naive;
  if (text == "improved") return Algorithm::Improved;
  throw UsageError("unknown algorithm \"" + std::string(text) +
                   "\" (expected naive or improved)");
}

std::string_view to_string(Algorithm algorithm) {
  return algorithm == Algorithm::Naive ? "naive" : "improved";
}

void keygen(BackendKind kind, const fs::path& out_dir, std::uint64_t seed,
            const std::string& adapter_path) {
  // Resolve the adapter before touching the filesystem so a missing backend
  // leaves nothing behind.
  std::unique_ptr<obool::AdapterSession> session;
  if (kind == BackendKind::Fhe) session = open_session(adapter_path);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir))
    throw DataError("cannot create key directory " + out_dir.string() +
                    (ec ? ": " + ec.message() : std::string{}));

  const KeyFiles keys{out_dir};
  StagedKeys staged(keys);
  if (kind == BackendKind::Sim) {
    std::ostringstream secret;
    secret << kSimSecretTag << "\nseed " << std::hex << seed << "\n";
    write_text(staged.secret_tmp, secret.str());
    write_text(staged.eval_tmp, std::string(kSimEvalTag) + "\n");
  } else {
    session->keygen(seed);
    session->save_keys(staged.secret_tmp, staged.eval_tmp);
  }
  staged.commit(keys);
}

obool::Backend open_owner_backend(BackendKind kind, const KeyFiles& keys,
                                  const std::string& adapter_path,
                                  obool::BackendOptions options) {
  if (kind == BackendKind::Sim) {
    require_sim_key(keys.secret(), kSimSecretTag);
    return obool::make_simulation_backend(true, options);
  }
  if (!fs::exists(keys.secret())) throw BackendError("missing key file " + keys.secret().string());
  auto session = open_session(adapter_path);
  session->load_secret_key(keys.secret());
  return obool::Backend(std::make_unique<obool::ExternalEngine>(std::move(session)), options);
}

obool::Backend open_analyst_backend(BackendKind kind, const KeyFiles& keys,
                                    const std::string& adapter_path,
                                    obool::BackendOptions options) {
  if (kind == BackendKind::Sim) {
    require_sim_key(keys.eval(), kSimEvalTag);
    return obool::make_simulation_backend(false, options);
  }
  if (!fs::exists(keys.eval())) throw BackendError("missing key file " + keys.eval().string());
  auto session = open_session(adapter_path);
  session->load_eval_key(keys.eval());
  return obool::Backend(std::make_unique<obool::ExternalEngine>(std::move(session)), options);
}

obool::Backend open_ephemeral_backend(BackendKind kind, std::uint64_t seed,
                                      const std::string& adapter_path,
                                      obool::BackendOptions options) {
  if (kind == BackendKind::Sim) return obool::make_simulation_backend(true, options);
  auto session = open_session(adapter_path);
  session->keygen(seed);
  return obool::Backend(std::make_unique<obool::ExternalEngine>(std::move(session)), options);
}

}  // namespace ocwc::protocol
