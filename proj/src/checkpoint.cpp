#include "hrlmppi/checkpoint.hpp"

#include <bit>
#include <fstream>
#include <vector>

namespace hrlmppi {

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace {
constexpr std::uint32_t kMagic = 0x4d4c5248;  // "HRLM"
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void write_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }
void write_f64(std::ostream& os, double v) { os.write(reinterpret_cast<const char*>(&v), 8); }

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}
double read_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}
}  // namespace

void save_checkpoint(const std::string& path, const PolicyNet& policy,
                     const ValueEnsemble& ensemble, std::uint64_t seed) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open checkpoint for writing: " + path);
  write_u32(os, kMagic);
  write_u32(os, kVersion);
  write_u64(os, seed);

  const auto& psizes = policy.mean_net().sizes();
  write_u32(os, static_cast<std::uint32_t>(psizes.size()));
  for (int s : psizes) write_u32(os, static_cast<std::uint32_t>(s));
  for (int d = 0; d < policy.act_dim(); ++d) write_f64(os, policy.act_lo()[d]);
  for (int d = 0; d < policy.act_dim(); ++d) write_f64(os, policy.act_hi()[d]);

  const auto& vsizes = ensemble.heads().front().sizes();
  write_u32(os, static_cast<std::uint32_t>(vsizes.size()));
  for (int s : vsizes) write_u32(os, static_cast<std::uint32_t>(s));
  write_u32(os, static_cast<std::uint32_t>(ensemble.n_heads()));

  std::vector<double> buf(policy.param_count());
  policy.get_params(buf);
  os.write(reinterpret_cast<const char*>(buf.data()), buf.size() * 8);
  buf.resize(ensemble.param_count());
  ensemble.get_params(buf);
  os.write(reinterpret_cast<const char*>(buf.data()), buf.size() * 8);

  const auto& norm = ensemble.norm();
  write_f64(os, norm.count());
  for (int i = 0; i < norm.dim(); ++i) write_f64(os, norm.mean()[i]);
  for (int i = 0; i < norm.dim(); ++i) write_f64(os, norm.m2()[i]);
  if (!os) throw ConfigError("checkpoint write failed: " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open checkpoint: " + path);
  if (read_u32(is) != kMagic) throw ConfigError("not a checkpoint file: " + path);
  if (read_u32(is) != kVersion) throw ConfigError("unsupported checkpoint version: " + path);

  LoadedCheckpoint out;
  out.seed = read_u64(is);

  const std::uint32_t np = read_u32(is);
  std::vector<int> psizes(np);
  for (auto& s : psizes) s = static_cast<int>(read_u32(is));
  const int act_dim = psizes.back();
  Vec lo(act_dim), hi(act_dim);
  for (int d = 0; d < act_dim; ++d) lo[d] = read_f64(is);
  for (int d = 0; d < act_dim; ++d) hi[d] = read_f64(is);

  const std::uint32_t nv = read_u32(is);
  std::vector<int> vsizes(nv);
  for (auto& s : vsizes) s = static_cast<int>(read_u32(is));
  const int n_heads = static_cast<int>(read_u32(is));
  if (!is) throw ConfigError("truncated checkpoint header: " + path);

  std::vector<int> phidden(psizes.begin() + 1, psizes.end() - 1);
  RngStream init_rng(out.seed, kStreamInitBase);
  out.policy = PolicyNet(psizes.front(), act_dim, phidden, lo, hi, init_rng);
  std::vector<int> vhidden(vsizes.begin() + 1, vsizes.end() - 1);
  out.ensemble = ValueEnsemble(vsizes.front(), vhidden, n_heads, out.seed);

  std::vector<double> buf(out.policy.param_count());
  is.read(reinterpret_cast<char*>(buf.data()), buf.size() * 8);
  out.policy.set_params(buf);
  buf.resize(out.ensemble.param_count());
  is.read(reinterpret_cast<char*>(buf.data()), buf.size() * 8);
  out.ensemble.set_params(buf);

  const double count = read_f64(is);
  const int dim = vsizes.front();
  Vec mean(dim), m2(dim);
  for (int i = 0; i < dim; ++i) mean[i] = read_f64(is);
  for (int i = 0; i < dim; ++i) m2[i] = read_f64(is);
  if (!is) throw ConfigError("truncated checkpoint payload: " + path);
  out.ensemble.norm().restore(count, mean, m2);
  return out;
}

}  // namespace hrlmppi
