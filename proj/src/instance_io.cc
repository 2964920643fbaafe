#include "spedac/instance_io.h"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <vector>

namespace spedac {
namespace {

// Splits one line into integers; throws ParseError on anything else.
std::vector<int64_t> ParseIntegers(std::string_view line, int line_number) {
  std::vector<int64_t> values;
  size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' ||
                                 line[pos] == '\r')) {
      ++pos;
    }
    if (pos == line.size()) break;
    int64_t value = 0;
    const auto [end, ec] =
        std::from_chars(line.data() + pos, line.data() + line.size(), value);
    if (ec != std::errc() ||
        (end != line.data() + line.size() && *end != ' ' && *end != '\t' &&
         *end != '\r')) {
      throw ParseError(line_number, "expected integer");
    }
    values.push_back(value);
    pos = static_cast<size_t>(end - line.data());
  }
  return values;
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : text_(text) {}

  // Next non-blank line, or throws ParseError at end of input.
  std::string_view Next(const char* expecting) {
    while (pos_ <= text_.size()) {
      const size_t end = std::min(text_.find('\n', pos_), text_.size());
      std::string_view line = text_.substr(pos_, end - pos_);
      pos_ = end + 1;
      ++line_number_;
      if (line.find_first_not_of(" \t\r") != std::string_view::npos) return line;
    }
    throw ParseError(line_number_, std::string("unexpected end of file, expecting ") +
                                       expecting);
  }

  bool AtEnd() {
    while (pos_ < text_.size()) {
      const size_t end = std::min(text_.find('\n', pos_), text_.size());
      if (text_.substr(pos_, end - pos_).find_first_not_of(" \t\r") !=
          std::string_view::npos) {
        return false;
      }
      pos_ = end + 1;
      ++line_number_;
    }
    return true;
  }

  int line_number() const { return line_number_; }

 private:
  std::string_view text_;
  size_t pos_ = 0;
  int line_number_ = 0;
};

std::vector<int64_t> Expect(LineReader& reader, size_t count,
                            const char* what) {
  const std::string_view line = reader.Next(what);
  std::vector<int64_t> values = ParseIntegers(line, reader.line_number());
  if (values.size() != count) {
    throw ParseError(reader.line_number(), std::string("expected ") +
                                               std::to_string(count) +
                                               " integers for " + what);
  }
  return values;
}

}  // namespace

Instance ParseInstance(std::string_view text) {
  LineReader reader(text);
  const std::string_view header = reader.Next("header");
  {
    std::istringstream in{std::string(header)};
    std::string magic;
    std::string version;
    std::string extra;
    in >> magic >> version;
    if (magic != "SPEDAC" || version != "1" || (in >> extra)) {
      throw ParseError(reader.line_number(), "expected header 'SPEDAC 1'");
    }
  }
  const std::vector<int64_t> counts = Expect(reader, 5, "counts line 'n m c s t'");
  const int64_t n = counts[0];
  const int64_t m = counts[1];
  const int64_t c = counts[2];
  if (n < 0 || m < 0 || c < 0 || n > INT32_MAX || m > INT32_MAX || c > INT32_MAX) {
    throw ParseError(reader.line_number(), "counts out of range");
  }
  std::vector<ArcRecord> arcs;
  arcs.reserve(m);
  for (int64_t i = 0; i < m; ++i) {
    const auto v = Expect(reader, 3, "arc line 'tail head weight'");
    if (v[0] < INT32_MIN || v[0] > INT32_MAX || v[1] < INT32_MIN || v[1] > INT32_MAX) {
      throw InvariantError("arc endpoint out of range");
    }
    arcs.push_back({static_cast<VertexId>(v[0]), static_cast<VertexId>(v[1]), v[2]});
  }
  std::vector<ConflictRecord> conflicts;
  conflicts.reserve(c);
  for (int64_t i = 0; i < c; ++i) {
    const auto v = Expect(reader, 3, "conflict line 'arcA arcB penalty'");
    if (v[0] < 0 || v[0] >= m || v[1] < 0 || v[1] >= m) {
      throw InvariantError("arc index out of range");
    }
    conflicts.push_back({static_cast<ArcIndex>(v[0]), static_cast<ArcIndex>(v[1]), v[2]});
  }
  if (!reader.AtEnd()) {
    throw ParseError(reader.line_number() + 1, "trailing content after conflicts");
  }
  if (counts[3] < 0 || counts[3] >= n || counts[4] < 0 || counts[4] >= n) {
    throw InvariantError("source or sink out of range");
  }
  return Instance(static_cast<int32_t>(n), std::move(arcs), std::move(conflicts),
                  static_cast<VertexId>(counts[3]), static_cast<VertexId>(counts[4]));
}

std::string RenderInstance(const Instance& instance) {
  std::string out = "SPEDAC 1\n";
  out += std::to_string(instance.vertex_count()) + ' ' +
         std::to_string(instance.arc_count()) + ' ' +
         std::to_string(instance.conflict_count()) + ' ' +
         std::to_string(instance.source()) + ' ' + std::to_string(instance.sink()) +
         '\n';
  for (const ArcRecord& arc : instance.arcs()) {
    out += std::to_string(arc.tail) + ' ' + std::to_string(arc.head) + ' ' +
           std::to_string(arc.weight) + '\n';
  }
  for (const ConflictRecord& c : instance.conflicts()) {
    out += std::to_string(c.arc_a) + ' ' + std::to_string(c.arc_b) + ' ' +
           std::to_string(c.penalty) + '\n';
  }
  return out;
}

std::string ReadTextFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteTextFile(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Instance ReadInstanceFile(const std::filesystem::path& path) {
  return ParseInstance(ReadTextFile(path));
}

}  // namespace spedac
