#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace biwalk {

// A word -> vector table in word2vec text layout: header `|V| D`, then one
// line per word with D reals.
struct VectorTable {
  int dim = 0;
  std::vector<std::string> words;
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<float> data;  // row-major, words.size() x dim

  std::size_t size() const { return words.size(); }

  std::span<const float> row(std::uint32_t i) const {
    return {data.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
  }
  std::span<float> row(std::uint32_t i) {
    return {data.data() + static_cast<std::size_t>(i) * dim, static_cast<std::size_t>(dim)};
  }

  std::optional<std::uint32_t> find(const std::string& word) const {
    auto it = index.find(word);
    if (it == index.end()) return std::nullopt;
    return it->second;
  }

  void rebuild_index();
};

VectorTable load_vectors(const std::string& path);
void save_vectors(const VectorTable& table, const std::string& path);

}  // namespace biwalk
