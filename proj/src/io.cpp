#include "excursion/io.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace excursion::io {
namespace {

std::map<std::string, std::string> parse_key_values(std::istringstream& line) {
  std::map<std::string, std::string> kv;
  std::string token;
  while (line >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw IoError("expected key=value, got '" + token + "'");
    kv[token.substr(0, eq)] = token.substr(eq + 1);
  }
  return kv;
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw IoError("bad value for " + what + ": '" + text + "'");
  return v;
}

int parse_int(const std::string& text, const std::string& what) {
  int v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw IoError("bad value for " + what + ": '" + text + "'");
  return v;
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw IoError("missing header key '" + key + "'");
  return it->second;
}

// Skips whitespace and '#' comments in the PBM body.
bool next_pbm_token(std::istream& in, char& c) {
  while (in.get(c)) {
    if (c == '#') {
      std::string rest;
      std::getline(in, rest);
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      return true;
    }
  }
  return false;
}

int read_pbm_int(std::istream& in) {
  char c;
  if (!next_pbm_token(in, c)) throw IoError("truncated PBM header");
  std::string digits(1, c);
  while (in.peek() != EOF && std::isdigit(in.peek())) digits.push_back(static_cast<char>(in.get()));
  return parse_int(digits, "PBM dimension");
}

}  // namespace

std::string format_decimal(double x) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), ptr);
}

void write_pbm(std::ostream& out, const BinaryField& field) {
  const int n = field.size();
  out << "P1\n# t=" << format_decimal(field.spec().half_width())
      << " epsilon=" << format_decimal(field.spec().pixel_width()) << "\n"
      << n << ' ' << n << '\n';
  std::string row(static_cast<std::size_t>(2 * n - 1), ' ');
  for (int j = n - 1; j >= 0; --j) {
    for (int i = 0; i < n; ++i) row[static_cast<std::size_t>(2 * i)] = field(i, j) ? '1' : '0';
    out << row << '\n';
  }
}

BinaryField read_pbm(std::istream& in) {
  std::string magic;
  std::getline(in, magic);
  if (magic.rfind("P1", 0) != 0) throw IoError("not a plain PBM (missing P1 magic)");
  // Optional grid line `# t=<t> epsilon=<eps>`; without it the image is
  // read in pixel units (eps = 1).
  std::optional<std::pair<double, double>> grid;
  while (std::isspace(in.peek())) in.get();
  if (in.peek() == '#') {
    std::string comment;
    std::getline(in, comment);
    std::istringstream cs(comment.substr(1));
    std::map<std::string, std::string> kv;
    try {
      kv = parse_key_values(cs);
    } catch (const IoError&) {
      kv.clear();  // a free-text comment
    }
    if (kv.count("t") || kv.count("epsilon"))
      grid.emplace(parse_double(require(kv, "t"), "t"), parse_double(require(kv, "epsilon"), "epsilon"));
  }

  const int width = read_pbm_int(in);
  const int height = read_pbm_int(in);
  if (width != height) throw IoError("PBM must be square");
  if (width < 2) throw IoError("PBM must be at least 2 x 2");
  const GridSpec spec = grid ? GridSpec(grid->first, width, grid->second)
                             : GridSpec::from_half_width(0.5 * (width - 1), width);

  RasterArray<std::uint8_t> v(height, width);
  for (int j = height - 1; j >= 0; --j)
    for (int i = 0; i < width; ++i) {
      char c;
      if (!next_pbm_token(in, c)) throw IoError("truncated PBM pixel data");
      if (c != '0' && c != '1') throw IoError("PBM pixels must be 0 or 1");
      v(j, i) = static_cast<std::uint8_t>(c - '0');
    }
  return BinaryField(spec, std::move(v));
}

void write_grf1(std::ostream& out, const ScalarField& field) {
  const int n = field.size();
  out << "GRF1 rows=" << n << " cols=" << n << " t=" << format_decimal(field.spec().half_width())
      << " epsilon=" << format_decimal(field.spec().pixel_width()) << '\n';
  const auto& values = field.values();
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    auto bits = std::bit_cast<std::uint64_t>(values.data()[k]);
    std::array<char, 8> bytes{};
    for (int b = 0; b < 8; ++b) bytes[static_cast<std::size_t>(b)] = static_cast<char>((bits >> (8 * b)) & 0xFF);
    out.write(bytes.data(), 8);
  }
}

ScalarField read_grf1(std::istream& in) {
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic;
  hs >> magic;
  if (magic != "GRF1") throw IoError("not a GRF1 file");
  const auto kv = parse_key_values(hs);
  const int rows = parse_int(require(kv, "rows"), "rows");
  const int cols = parse_int(require(kv, "cols"), "cols");
  if (rows != cols) throw IoError("GRF1 field must be square");
  const GridSpec spec(parse_double(require(kv, "t"), "t"), rows,
                      parse_double(require(kv, "epsilon"), "epsilon"));

  RasterArray<double> v(rows, cols);
  std::array<char, 8> bytes{};
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (!in.read(bytes.data(), 8)) throw IoError("truncated GRF1 payload");
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b)
      bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[static_cast<std::size_t>(b)])) << (8 * b);
    v.data()[k] = std::bit_cast<double>(bits);
  }
  return ScalarField(spec, std::move(v));
}

void save_pbm(const std::string& path, const BinaryField& field) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_pbm(out, field);
}

BinaryField load_pbm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return read_pbm(in);
}

void save_grf1(const std::string& path, const ScalarField& field) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_grf1(out, field);
}

ScalarField load_grf1(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  return read_grf1(in);
}

}  // namespace excursion::io
