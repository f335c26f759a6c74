#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace nfasat {

/// Index of a symbol in the alphabet.
enum class Symbol : std::uint16_t {};

constexpr std::uint16_t id(Symbol s) { return static_cast<std::uint16_t>(s); }
constexpr Symbol sym(std::uint32_t i) { return static_cast<Symbol>(i); }

/// A word over the alphabet. The empty word is the empty vector.
using Word = std::vector<Symbol>;

/// Length first, then lexicographic. Every prefix of a word sorts before it.
struct ShortLex {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

using WordSet = std::set<Word, ShortLex>;

Word reversed(const Word& w);

/// Renders a word in the plain sample notation: letters a-z when the alphabet
/// has at most 26 symbols, comma separated ids otherwise.
std::string format_word(const Word& w, std::size_t alphabet_size);

/// Inverse of format_word. Without a comma every character is one symbol
/// (a-z -> 0..25, 0-9 -> 0..9); with a comma the text is a list of ids.
Word parse_word(std::string_view text);

/// A labelled training sample over an alphabet of `alphabet_size` symbols.
/// Immutable once built.
class Sample {
 public:
  Sample() = default;

  /// Throws InvalidArgument if a symbol is out of range or a word is both
  /// positive and negative.
  Sample(std::size_t alphabet_size, WordSet positives, WordSet negatives);

  std::size_t alphabet_size() const { return alphabet_size_; }
  const WordSet& positives() const { return positives_; }
  const WordSet& negatives() const { return negatives_; }

  bool lambda_positive() const;
  bool lambda_negative() const;

  /// Every word of S+ then S-, excluding the empty word, each part in
  /// short-lex order. Split assignments are indexed in this order.
  const std::vector<Word>& splittable_words() const { return splittable_; }

  /// Number of positive entries among splittable_words() (they come first).
  std::size_t splittable_positive_count() const { return splittable_positives_; }

  /// All words of S (positives then negatives).
  WordSet all_words() const;

  /// Sum of word lengths.
  std::size_t total_length() const;

  std::size_t size() const { return positives_.size() + negatives_.size(); }

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  std::size_t alphabet_size_ = 0;
  WordSet positives_;
  WordSet negatives_;
  std::vector<Word> splittable_;
  std::size_t splittable_positives_ = 0;
};

enum class SampleFormat { Auto, Plain, Abbadingo };

/// Reads a sample. `alphabet_size` supplies n when a plain file has no
/// `n=` header; otherwise n is inferred from the largest symbol id.
Sample parse_sample(std::istream& in, SampleFormat format = SampleFormat::Auto,
                    std::optional<std::size_t> alphabet_size = std::nullopt);
Sample parse_sample(std::string_view text, SampleFormat format = SampleFormat::Auto,
                    std::optional<std::size_t> alphabet_size = std::nullopt);
Sample load_sample(const std::filesystem::path& path, SampleFormat format = SampleFormat::Auto);

void write_sample(std::ostream& out, const Sample& sample, SampleFormat format = SampleFormat::Plain);
std::string to_string(const Sample& sample, SampleFormat format = SampleFormat::Plain);

/// All non-empty prefixes of the given words.
WordSet prefixes(const WordSet& words);
/// All non-empty suffixes of the given words.
WordSet suffixes(const WordSet& words);

/// One cut index per entry of Sample::splittable_words(); word w is split
/// into w[0, cut) and w[cut, |w|).
struct SplitAssignment {
  std::vector<std::uint32_t> cuts;

  friend bool operator==(const SplitAssignment&, const SplitAssignment&) = default;
  friend auto operator<=>(const SplitAssignment&, const SplitAssignment&) = default;
};

/// Throws InvalidArgument unless there is exactly one cut per splittable
/// word and every cut lies in [0, |w|].
void validate_cuts(const Sample& sample, const SplitAssignment& cuts);

SplitAssignment all_prefix_cuts(const Sample& sample);
SplitAssignment all_suffix_cuts(const Sample& sample);

struct WordSplit {
  Word prefix;
  Word suffix;
};

struct SplitSets {
  WordSet prefixes;               // S_p without the empty word
  WordSet suffixes;               // S_s without the empty word
  std::vector<WordSplit> parts;   // aligned with splittable_words()
};

SplitSets split_sets(const Sample& sample, const SplitAssignment& cuts);

/// Cuts file: one `<word> <cut>` line per splittable word.
SplitAssignment read_cuts(std::istream& in, const Sample& sample);
void write_cuts(std::ostream& out, const Sample& sample, const SplitAssignment& cuts);

using WordId = std::uint32_t;

/// Interns words to dense ids so that word-keyed structures hold integers.
class WordPool {
 public:
  WordId intern(const Word& w);
  std::optional<WordId> find(const Word& w) const;
  const Word& word(WordId id) const { return words_[id]; }
  std::size_t size() const { return words_.size(); }

 private:
  struct Hash {
    std::size_t operator()(const Word& w) const;
  };
  std::vector<Word> words_;
  std::unordered_map<Word, WordId, Hash> ids_;
};

/// Prefix and suffix tries over the splittable words of a sample.
///
/// Each distinct non-empty prefix (resp. suffix) of the sample is one trie
/// node, so Pref(S_p) and Suf(S_s) for any split are sets of node ids.
class AffixIndex {
 public:
  explicit AffixIndex(const Sample& sample);

  std::size_t word_count() const { return lengths_.size(); }
  std::size_t length(std::size_t word) const { return lengths_[word]; }

  /// Node ids of the prefixes of `word` of length 1..|w|, in that order.
  std::span<const std::uint32_t> prefix_nodes(std::size_t word) const;
  /// Node ids of the suffixes of `word` of length 1..|w|, in that order.
  std::span<const std::uint32_t> suffix_nodes(std::size_t word) const;

  std::size_t prefix_node_count() const { return prefix_nodes_total_; }
  std::size_t suffix_node_count() const { return suffix_nodes_total_; }

 private:
  std::vector<std::size_t> lengths_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> prefix_path_;
  std::vector<std::uint32_t> suffix_path_;
  std::size_t prefix_nodes_total_ = 0;
  std::size_t suffix_nodes_total_ = 0;
};

}  // namespace nfasat
