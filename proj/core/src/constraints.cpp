#include "biwalk/constraints.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "biwalk/errors.hpp"
#include "biwalk/kb_graph.hpp"
#include "biwalk/text.hpp"

namespace biwalk {

namespace {

std::string index_key(const std::string& word, const std::string& lang) {
  return lang + '\t' + word;
}

Constraint canonical(TaggedWord x, TaggedWord y) {
  if (y < x) std::swap(x, y);
  return Constraint{std::move(x), std::move(y)};
}

}  // namespace

ConstraintSet::ConstraintSet(std::vector<Constraint> pairs,
                             std::vector<std::string> languages)
    : pairs_(std::move(pairs)), languages_(std::move(languages)) {
  if (languages_.empty()) {
    std::set<std::string> seen;
    for (const auto& p : pairs_) {
      seen.insert(p.a.lang);
      seen.insert(p.b.lang);
    }
    languages_.assign(seen.begin(), seen.end());
  }
  for (auto& p : pairs_) {
    if (p.b < p.a) std::swap(p.a, p.b);
    if (p.a == p.b) {
      throw ValidationError("degenerate constraint pair: " + p.a.word + "/" + p.a.lang);
    }
  }
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  for (const auto& p : pairs_) {
    if (p.bilingual()) ++bilingual_count_;
    index_[index_key(p.a.word, p.a.lang)].push_back(p.b);
    index_[index_key(p.b.word, p.b.lang)].push_back(p.a);
  }
  for (auto& [key, nbrs] : index_) {
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
  }
}

const std::vector<TaggedWord>& ConstraintSet::neighbors(const std::string& word,
                                                        const std::string& lang) const {
  static const std::vector<TaggedWord> kEmpty;
  auto it = index_.find(index_key(word, lang));
  return it == index_.end() ? kEmpty : it->second;
}

ConstraintSet ConstraintSet::bilingual_only() const {
  std::vector<Constraint> out;
  out.reserve(bilingual_count_);
  for (const auto& p : pairs_) {
    if (p.bilingual()) out.push_back(p);
  }
  return ConstraintSet(std::move(out), languages_);
}

ConstraintSet mine_constraints(const Lexicon& lexicon) {
  std::set<Constraint> seen;
  std::vector<TaggedWord> members;
  for (ConceptIndex c = 0; c < lexicon.concept_count(); ++c) {
    members.clear();
    for (std::size_t slot = 0; slot < 2; ++slot) {
      for (const auto& w : lexicon.words(c, slot)) {
        members.push_back({w, lexicon.languages()[slot]});
      }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        if (members[i] == members[j]) continue;
        seen.insert(canonical(members[i], members[j]));
      }
    }
  }
  return ConstraintSet(std::vector<Constraint>(seen.begin(), seen.end()),
                       {lexicon.languages()[0], lexicon.languages()[1]});
}

std::vector<std::pair<std::string, std::string>> translation_dictionary(
    const ConstraintSet& cs, const std::string& from, const std::string& to) {
  if (from == to) throw ValidationError("dictionary languages must differ: " + from);
  const auto& langs = cs.languages();
  if (!langs.empty()) {
    for (const auto& lang : {from, to}) {
      if (std::find(langs.begin(), langs.end(), lang) == langs.end()) {
        throw ValidationError("unknown dictionary language: " + lang);
      }
    }
  }
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& p : cs.pairs()) {
    if (!p.bilingual()) continue;
    if (p.a.lang == from && p.b.lang == to) {
      out.insert({p.a.word, p.b.word});
    } else if (p.b.lang == from && p.a.lang == to) {
      out.insert({p.b.word, p.a.word});
    }
  }
  return {out.begin(), out.end()};
}

void save_constraints(const ConstraintSet& cs, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  for (const auto& p : cs.pairs()) {
    out << p.a.word << '\t' << p.a.lang << '\t' << p.b.word << '\t' << p.b.lang << '\t'
        << (p.bilingual() ? "bilingual" : "monolingual") << '\n';
  }
  if (!out) throw ParseError("write failed: " + path);
}

ConstraintSet load_constraints(const std::string& path) {
  const auto lines = read_lines(path);
  std::vector<Constraint> pairs;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_tab(line);
    if (fields.size() != 5) {
      throw ParseError(path, i + 1, "expected `word_a lang_a word_b lang_b kind`");
    }
    Constraint p = canonical({std::string(fields[0]), std::string(fields[1])},
                             {std::string(fields[2]), std::string(fields[3])});
    if (p.a == p.b) {
      throw ValidationError(path + ":" + std::to_string(i + 1) + ": degenerate pair");
    }
    const bool bilingual = fields[4] == "bilingual";
    if (!bilingual && fields[4] != "monolingual") {
      throw ParseError(path, i + 1, "kind must be monolingual or bilingual");
    }
    if (bilingual != p.bilingual()) {
      throw ValidationError(path + ":" + std::to_string(i + 1) +
                            ": kind disagrees with language tags");
    }
    pairs.push_back(std::move(p));
  }
  return ConstraintSet(std::move(pairs));
}

}  // namespace biwalk
