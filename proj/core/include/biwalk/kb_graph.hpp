#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace biwalk {

using ConceptIndex = std::uint32_t;

// Undirected multilingual knowledge-base graph: the walk substrate.
// Immutable after construction; safe for concurrent reads.
class KnowledgeGraph {
 public:
  // Builds from (a, b) id pairs. Self-loops are rejected; duplicate and
  // reversed-duplicate edges collapse to one.
  static KnowledgeGraph from_edges(
      const std::vector<std::pair<std::string, std::string>>& edges,
      const std::vector<std::string>& isolated_concepts = {});

  std::size_t concept_count() const { return ids_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const std::vector<std::string>& concept_ids() const { return ids_; }
  const std::string& id_of(ConceptIndex c) const { return ids_[c]; }

  bool contains(const std::string& id) const { return index_.count(id) > 0; }
  // Throws LookupError for unknown ids.
  ConceptIndex index_of(const std::string& id) const;

  const std::vector<ConceptIndex>& neighbors(ConceptIndex c) const {
    return adjacency_[c];
  }
  std::size_t degree(ConceptIndex c) const { return adjacency_[c].size(); }
  std::size_t degree(const std::string& id) const { return degree(index_of(id)); }

  // Canonical edge list, each pair with index a < b, sorted.
  const std::vector<std::pair<ConceptIndex, ConceptIndex>>& edges() const {
    return edges_;
  }

 private:
  std::vector<std::string> ids_;
  std::unordered_map<std::string, ConceptIndex> index_;
  std::vector<std::vector<ConceptIndex>> adjacency_;
  std::vector<std::pair<ConceptIndex, ConceptIndex>> edges_;
};

// Per-language lexicalization sets for each concept of a companion graph.
// Words are lowercased on load; a concept may be unlexicalized in either
// or both languages. Immutable after load.
class Lexicon {
 public:
  Lexicon(std::array<std::string, 2> languages, std::size_t concept_count)
      : languages_(std::move(languages)), entries_(concept_count) {}

  const std::array<std::string, 2>& languages() const { return languages_; }
  // Throws ValidationError for a language outside the declared pair.
  std::size_t language_slot(const std::string& lang) const;

  const std::vector<std::string>& words(ConceptIndex c, std::size_t lang_slot) const {
    return entries_[c][lang_slot];
  }
  bool lexicalized(ConceptIndex c, std::size_t lang_slot) const {
    return !entries_[c][lang_slot].empty();
  }
  std::size_t concept_count() const { return entries_.size(); }

  // Sorted-unique insert; the word must already be folded to lowercase.
  void add_word(ConceptIndex c, std::size_t lang_slot, const std::string& word);

  // Concepts with at least one word in the given slot.
  std::size_t lexicalized_count(std::size_t lang_slot) const;

 private:
  std::array<std::string, 2> languages_;
  std::vector<std::array<std::vector<std::string>, 2>> entries_;
};

// Loads a TSV edge file: one `concept_a<TAB>concept_b` per line, `#`
// comments and blank lines ignored. Throws ParseError / ValidationError.
KnowledgeGraph load_graph(const std::string& path);

// Writes the canonical edge list (lexicographic by id pair).
void save_graph(const KnowledgeGraph& graph, const std::string& path);

// Loads a TSV lexicon: `concept<TAB>lang<TAB>word` per line. Words are
// case-folded; the concept must exist in the graph and the language must be
// one of the two given codes.
Lexicon load_lexicon(const std::string& path, const KnowledgeGraph& graph,
                     const std::array<std::string, 2>& languages);

}  // namespace biwalk
