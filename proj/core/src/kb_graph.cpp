#include "biwalk/kb_graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "biwalk/errors.hpp"
#include "biwalk/text.hpp"

namespace biwalk {

namespace {

ConceptIndex intern(std::unordered_map<std::string, ConceptIndex>& index,
                    std::vector<std::string>& ids, const std::string& id) {
  auto [it, inserted] = index.try_emplace(id, static_cast<ConceptIndex>(ids.size()));
  if (inserted) ids.push_back(id);
  return it->second;
}

}  // namespace

KnowledgeGraph KnowledgeGraph::from_edges(
    const std::vector<std::pair<std::string, std::string>>& edges,
    const std::vector<std::string>& isolated_concepts) {
  KnowledgeGraph g;
  std::set<std::pair<ConceptIndex, ConceptIndex>> edge_set;
  for (const auto& [a, b] : edges) {
    if (a.empty() || b.empty()) throw ValidationError("empty concept id in edge");
    if (a == b) throw ValidationError("self-loop edge rejected: " + a);
    ConceptIndex ia = intern(g.index_, g.ids_, a);
    ConceptIndex ib = intern(g.index_, g.ids_, b);
    edge_set.insert({std::min(ia, ib), std::max(ia, ib)});
  }
  for (const auto& id : isolated_concepts) {
    if (id.empty()) throw ValidationError("empty concept id");
    intern(g.index_, g.ids_, id);
  }
  g.adjacency_.resize(g.ids_.size());
  g.edges_.assign(edge_set.begin(), edge_set.end());
  for (const auto& [a, b] : g.edges_) {
    g.adjacency_[a].push_back(b);
    g.adjacency_[b].push_back(a);
  }
  for (auto& nbrs : g.adjacency_) std::sort(nbrs.begin(), nbrs.end());
  return g;
}

ConceptIndex KnowledgeGraph::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw LookupError("unknown concept: " + id);
  return it->second;
}

std::size_t Lexicon::language_slot(const std::string& lang) const {
  if (lang == languages_[0]) return 0;
  if (lang == languages_[1]) return 1;
  throw ValidationError("unknown language code: " + lang + " (expected " +
                        languages_[0] + " or " + languages_[1] + ")");
}

void Lexicon::add_word(ConceptIndex c, std::size_t lang_slot, const std::string& word) {
  auto& words = entries_[c][lang_slot];
  auto it = std::lower_bound(words.begin(), words.end(), word);
  if (it == words.end() || *it != word) words.insert(it, word);
}

std::size_t Lexicon::lexicalized_count(std::size_t lang_slot) const {
  std::size_t n = 0;
  for (const auto& entry : entries_) {
    if (!entry[lang_slot].empty()) ++n;
  }
  return n;
}

KnowledgeGraph load_graph(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<std::pair<std::string, std::string>> edges;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_tab(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw ParseError(path, i + 1, "expected `concept_a<TAB>concept_b`");
    }
    if (fields[0] == fields[1]) {
      throw ValidationError(path + ":" + std::to_string(i + 1) +
                            ": self-loop edge rejected: " + std::string(fields[0]));
    }
    edges.emplace_back(std::string(fields[0]), std::string(fields[1]));
  }
  return KnowledgeGraph::from_edges(edges);
}

void save_graph(const KnowledgeGraph& graph, const std::string& path) {
  std::vector<std::string> lines;
  lines.reserve(graph.edge_count());
  for (const auto& [a, b] : graph.edges()) {
    const std::string& ia = graph.id_of(a);
    const std::string& ib = graph.id_of(b);
    lines.push_back(ia <= ib ? ia + "\t" + ib : ib + "\t" + ia);
  }
  std::sort(lines.begin(), lines.end());
  write_lines(path, lines);
}

Lexicon load_lexicon(const std::string& path, const KnowledgeGraph& graph,
                     const std::array<std::string, 2>& languages) {
  if (languages[0] == languages[1]) {
    throw ValidationError("lexicon languages must differ: " + languages[0]);
  }
  const auto lines = read_lines(path);
  Lexicon lex(languages, graph.concept_count());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_tab(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      throw ParseError(path, i + 1, "expected `concept<TAB>lang<TAB>word`");
    }
    const std::string concept_id(fields[0]);
    if (!graph.contains(concept_id)) {
      throw ValidationError(path + ":" + std::to_string(i + 1) +
                            ": concept not in graph: " + concept_id);
    }
    std::size_t slot;
    try {
      slot = lex.language_slot(std::string(fields[1]));
    } catch (const ValidationError& e) {
      throw ValidationError(path + ":" + std::to_string(i + 1) + ": " + e.what());
    }
    const std::string word = fold_case(fields[2]);
    if (word.find_first_of(" \t") != std::string::npos) {
      throw ValidationError(path + ":" + std::to_string(i + 1) +
                            ": word contains whitespace (join lemmas with '_'): " + word);
    }
    lex.add_word(graph.index_of(concept_id), slot, word);
  }
  return lex;
}

}  // namespace biwalk
