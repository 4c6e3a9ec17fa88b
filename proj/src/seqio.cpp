#include "torcor/seqio.hpp"

#include <fstream>
#include <iterator>

#include <nlohmann/json.hpp>

#include "torcor/error.hpp"

namespace torcor {

using nlohmann::json;

namespace {

constexpr char kMagic[4] = {'T', 'S', 'E', 'Q'};

void put_le64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint64_t get_le64(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[offset + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_tseq(std::span<const TorusPoint> points) {
  std::vector<std::uint8_t> out;
  out.reserve(kTseqHeaderSize + 8 * points.size());
  out.insert(out.end(), std::begin(kMagic), std::end(kMagic));
  out.push_back(kTseqVersion);
  put_le64(out, points.size());
  for (auto p : points) put_le64(out, p.word());
  return out;
}

std::vector<TorusPoint> decode_tseq(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw ParseError("TSEQ: file too short for magic", bytes.size());
  for (std::size_t i = 0; i < 4; ++i)
    if (bytes[i] != static_cast<std::uint8_t>(kMagic[i])) throw ParseError("TSEQ: bad magic", i);
  if (bytes.size() < 5) throw ParseError("TSEQ: missing version byte", 4);
  if (bytes[4] != kTseqVersion)
    throw ParseError("TSEQ: unsupported version " + std::to_string(bytes[4]), 4);
  if (bytes.size() < kTseqHeaderSize) throw ParseError("TSEQ: truncated length field", bytes.size());
  const std::uint64_t n = get_le64(bytes, 5);
  const std::uint64_t body = bytes.size() - kTseqHeaderSize;
  if (n > body / 8 || body != 8 * n)
    throw ParseError("TSEQ: declared N = " + std::to_string(n) + " needs " +
                         (n > body / 8 ? std::string("more than ") + std::to_string(body)
                                       : std::to_string(8 * n)) +
                         " body bytes, found " + std::to_string(body),
                     kTseqHeaderSize + std::min<std::uint64_t>(body, 8 * n));
  std::vector<TorusPoint> points;
  points.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) points.emplace_back(get_le64(bytes, kTseqHeaderSize + 8 * i));
  return points;
}

std::string provenance_to_json(const GeneratorSpec& spec, int indent) {
  json j;
  j["family"] = std::string(to_string(spec.family));
  j["seed"] = spec.seed;
  j["n"] = spec.n;
  j["alpha_word"] = spec.alpha.word();
  j["alpha"] = spec.alpha.to_double();
  j["degree"] = spec.degree;
  j["dilation"] = spec.dilation;
  return j.dump(indent);
}

GeneratorSpec provenance_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    GeneratorSpec spec;
    spec.family = parse_family(j.at("family").get<std::string>());
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.n = j.at("n").get<std::size_t>();
    spec.alpha = TorusPoint(j.value("alpha_word", std::uint64_t{0}));
    spec.degree = j.value("degree", 1u);
    spec.dilation = j.value("dilation", std::vector<std::uint64_t>{});
    return spec;
  } catch (const json::exception& e) {
    throw ParseError(std::string("provenance JSON: ") + e.what(), 0);
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& data_path) {
  auto p = data_path;
  p += ".json";
  return p;
}

void save_sequence(const TorusSequence& seq, const std::filesystem::path& path) {
  const auto bytes = encode_tseq(seq.points);
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing '" + path.string() + "'");
  }
  std::ofstream side(sidecar_path(path));
  if (!side) throw Error("cannot open '" + sidecar_path(path).string() + "' for writing");
  side << provenance_to_json(seq.provenance) << '\n';
}

TorusSequence load_sequence(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  TorusSequence seq;
  seq.points = decode_tseq(bytes);
  if (std::ifstream side(sidecar_path(path)); side) {
    const std::string text((std::istreambuf_iterator<char>(side)), std::istreambuf_iterator<char>());
    seq.provenance = provenance_from_json(text);
    if (seq.provenance.n != seq.points.size())
      throw ParseError("sidecar declares N = " + std::to_string(seq.provenance.n) + " but data holds " +
                           std::to_string(seq.points.size()),
                       5);
  } else {
    seq.provenance.family = Family::external;
    seq.provenance.n = seq.points.size();
  }
  return seq;
}

}  // namespace torcor
