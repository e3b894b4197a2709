#include "biwalk/vectors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "biwalk/errors.hpp"
#include "biwalk/text.hpp"

namespace biwalk {

void VectorTable::rebuild_index() {
  index.clear();
  index.reserve(words.size());
  for (std::uint32_t i = 0; i < words.size(); ++i) index.emplace(words[i], i);
}

VectorTable load_vectors(const std::string& path) {
  const auto lines = read_lines(path);
  if (lines.empty()) throw ParseError(path, 1, "missing `|V| D` header");
  const auto header = split_ws(lines[0]);
  if (header.size() != 2) throw ParseError(path, 1, "header must be `|V| D`");
  std::size_t vocab_size = 0;
  int dim = 0;
  auto r1 = std::from_chars(header[0].data(), header[0].data() + header[0].size(), vocab_size);
  auto r2 = std::from_chars(header[1].data(), header[1].data() + header[1].size(), dim);
  if (r1.ec != std::errc{} || r2.ec != std::errc{} || dim <= 0) {
    throw ParseError(path, 1, "unparsable header");
  }
  std::size_t body = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (!lines[i].empty()) ++body;
  }
  if (body != vocab_size) {
    throw ParseError(path, 1,
                     "header declares " + std::to_string(vocab_size) + " words, body has " +
                         std::to_string(body));
  }

  VectorTable table;
  table.dim = dim;
  table.words.reserve(vocab_size);
  table.data.reserve(vocab_size * static_cast<std::size_t>(dim));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto fields = split_ws(lines[i]);
    if (fields.size() != static_cast<std::size_t>(dim) + 1) {
      throw ParseError(path, i + 1,
                       "expected token + " + std::to_string(dim) + " values, got " +
                           std::to_string(fields.size()));
    }
    table.words.emplace_back(fields[0]);
    for (int d = 1; d <= dim; ++d) {
      float v = 0.0f;
      auto res = std::from_chars(fields[d].data(), fields[d].data() + fields[d].size(), v);
      if (res.ec != std::errc{}) throw ParseError(path, i + 1, "unparsable value");
      table.data.push_back(v);
    }
  }
  table.rebuild_index();
  return table;
}

void save_vectors(const VectorTable& table, const std::string& path) {
  if (table.words.empty()) throw ConfigError("refusing to save an empty vector table");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << table.words.size() << ' ' << table.dim << '\n';
  char buf[64];
  for (std::uint32_t i = 0; i < table.words.size(); ++i) {
    out << table.words[i];
    for (float v : table.row(i)) {
      std::snprintf(buf, sizeof(buf), " %.9g", static_cast<double>(v));
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw ParseError("write failed: " + path);
}

}  // namespace biwalk
