#include "eklab/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>
#include <stdexcept>

namespace eklab::cli {

namespace fs = std::filesystem;

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned i = 0; i < len; ++i) {
    hex += kHex[md[i] >> 4];
    hex += kHex[md[i] & 15];
  }
  return hex;
}

std::string tool_version() { return EKLAB_VERSION; }

nlohmann::ordered_json RunManifest::to_json(const fs::path& base) const {
  nlohmann::ordered_json j;
  j["subcommand"] = subcommand;
  j["version"] = tool_version();
  j["argv"] = argv;
  j["parameters"] = parameters;
  j["wall_seconds"] = wall_seconds;
  auto outs = nlohmann::ordered_json::array();
  for (const auto& p : outputs) {
    const auto rel = fs::proximate(p, base);
    outs.push_back({{"path", rel.generic_string()},
                    {"bytes", fs::file_size(p)},
                    {"sha256", sha256_file(p)}});
  }
  j["outputs"] = std::move(outs);
  return j;
}

void RunManifest::write(const fs::path& path) const {
  auto base = path.parent_path();
  if (base.empty()) base = ".";
  const auto j = to_json(base);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace eklab::cli
