#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace biwalk {

class Lexicon;

// A word identified by its language. Ordering is lexicographic on
// (lang, word); constraint pairs are stored with the smaller member first.
struct TaggedWord {
  std::string word;
  std::string lang;

  friend auto operator<=>(const TaggedWord& a, const TaggedWord& b) {
    if (auto c = a.lang <=> b.lang; c != 0) return c;
    return a.word <=> b.word;
  }
  friend bool operator==(const TaggedWord&, const TaggedWord&) = default;
};

// One synonym (monolingual) or translation-equivalent (bilingual) pair.
struct Constraint {
  TaggedWord a;
  TaggedWord b;

  bool bilingual() const { return a.lang != b.lang; }
  friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

// De-duplicated, canonically ordered constraint pairs mined from a lexicon,
// with a neighbor index for per-word queries.
class ConstraintSet {
 public:
  ConstraintSet() = default;
  explicit ConstraintSet(std::vector<Constraint> pairs,
                         std::vector<std::string> languages = {});

  const std::vector<Constraint>& pairs() const { return pairs_; }
  // Declared language inventory (from the mined lexicon or the loaded file).
  const std::vector<std::string>& languages() const { return languages_; }
  std::size_t size() const { return pairs_.size(); }
  std::size_t bilingual_count() const { return bilingual_count_; }

  // All partners of (word, lang) across both languages: the M_l(w) sets.
  // Unknown words yield an empty list.
  const std::vector<TaggedWord>& neighbors(const std::string& word,
                                           const std::string& lang) const;

  ConstraintSet bilingual_only() const;

 private:
  std::vector<Constraint> pairs_;
  std::vector<std::string> languages_;
  std::size_t bilingual_count_ = 0;
  std::unordered_map<std::string, std::vector<TaggedWord>> index_;
};

// Emits one constraint for every unordered pair of distinct tagged words
// sharing a concept; pairs seen under several concepts collapse to one.
ConstraintSet mine_constraints(const Lexicon& lexicon);

// Bilingual pairs projected in the given direction, sorted and de-duplicated.
std::vector<std::pair<std::string, std::string>> translation_dictionary(
    const ConstraintSet& cs, const std::string& from, const std::string& to);

// TSV: word_a lang_a word_b lang_b kind(monolingual|bilingual).
void save_constraints(const ConstraintSet& cs, const std::string& path);
ConstraintSet load_constraints(const std::string& path);

}  // namespace biwalk
