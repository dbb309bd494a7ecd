#include "certun/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "certun/error.hpp"

namespace certun {

namespace {

constexpr char kMagic[8] = {'C', 'U', 'N', 'M', 'O', 'D', 'E', 'L'};
constexpr std::size_t kHeaderSize = 48;

void put_u64(std::string& out, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}
void put_u32(std::string& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((x >> (8 * i)) & 0xff));
}
void put_f64(std::string& out, double x) { put_u64(out, std::bit_cast<std::uint64_t>(x)); }

std::uint64_t get_u64(const std::string& in, std::size_t at) {
  std::uint64_t x = 0;
  for (int i = 0; i < 8; ++i)
    x |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return x;
}
std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t x = 0;
  for (int i = 0; i < 4; ++i)
    x |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  return x;
}
double get_f64(const std::string& in, std::size_t at) { return std::bit_cast<double>(get_u64(in, at)); }

}  // namespace

std::string encode_checkpoint(const TrainedModel& model) {
  std::string out(kMagic, kMagic + 8);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(model.spec.kind));
  put_u64(out, model.theta.size());
  put_u32(out, static_cast<std::uint32_t>(model.spec.k));
  put_u32(out, model.spec.kind == ModelKind::Gcn2 ? static_cast<std::uint32_t>(model.spec.hidden) : 0u);
  put_f64(out, model.spec.reg_lambda);
  put_u64(out, model.seed);
  for (double x : model.theta) put_f64(out, x);
  return out;
}

TrainedModel decode_checkpoint(const std::string& bytes) {
  if (bytes.size() < kHeaderSize || std::memcmp(bytes.data(), kMagic, 8) != 0)
    throw Error(ErrorCode::Parse, "not a model checkpoint (bad magic)");
  if (get_u32(bytes, 8) != kCheckpointVersion)
    throw Error(ErrorCode::Parse, "unsupported checkpoint version " + std::to_string(get_u32(bytes, 8)));
  const auto kind = get_u32(bytes, 12);
  if (kind > 1) throw Error(ErrorCode::Parse, "unknown model kind in checkpoint");
  const auto p = get_u64(bytes, 16);
  if (bytes.size() != kHeaderSize + 8 * p)
    throw Error(ErrorCode::Parse, "checkpoint size does not match parameter count");

  TrainedModel m;
  m.spec.kind = static_cast<ModelKind>(kind);
  m.spec.k = static_cast<int>(get_u32(bytes, 24));
  const auto hidden = get_u32(bytes, 28);
  if (m.spec.kind == ModelKind::Gcn2) m.spec.hidden = hidden;
  m.spec.reg_lambda = get_f64(bytes, 32);
  m.seed = get_u64(bytes, 40);
  m.theta.resize(p);
  for (std::size_t i = 0; i < p; ++i) m.theta[i] = get_f64(bytes, kHeaderSize + 8 * i);
  if (!all_finite(m.theta)) throw Error(ErrorCode::Parse, "checkpoint contains non-finite parameters");
  return m;
}

void save_checkpoint(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write checkpoint " + path.string());
  const auto bytes = encode_checkpoint(model);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

TrainedModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open checkpoint " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return decode_checkpoint(ss.str());
}

}  // namespace certun
