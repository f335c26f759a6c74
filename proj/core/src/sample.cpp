#include "nfasat/sample.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "nfasat/error.hpp"

namespace nfasat {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

bool parse_uint(std::string_view s, std::size_t& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

bool is_comment_or_blank(std::string_view line) {
  line = trim(line);
  return line.empty() || line.front() == '#';
}

constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";

struct Labelled {
  Word word;
  bool positive;
};

Sample assemble(std::size_t n, const std::vector<Labelled>& items) {
  WordSet pos;
  WordSet neg;
  for (const auto& item : items) {
    for (Symbol s : item.word) {
      if (id(s) >= n)
        throw ParseError("symbol id " + std::to_string(id(s)) + " out of range for alphabet of size " +
                         std::to_string(n));
    }
    (item.positive ? pos : neg).insert(item.word);
  }
  for (const auto& w : pos) {
    if (neg.contains(w))
      throw ParseError("word '" + format_word(w, n) + "' is labelled both positive and negative");
  }
  return Sample(n, std::move(pos), std::move(neg));
}

Sample parse_plain(const std::vector<std::string>& lines, std::optional<std::size_t> alphabet_size) {
  std::optional<std::size_t> n = alphabet_size;
  std::vector<Labelled> items;
  bool seen_word = false;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    std::string_view line = trim(lines[ln]);
    if (is_comment_or_blank(line)) continue;
    const std::string where = "line " + std::to_string(ln + 1) + ": ";
    if (line.starts_with("n=")) {
      if (seen_word) throw ParseError(where + "header must precede the words");
      std::size_t value = 0;
      if (!parse_uint(line.substr(2), value) || value == 0)
        throw ParseError(where + "malformed header '" + std::string(line) + "'");
      n = value;
      continue;
    }
    bool positive;
    std::string_view body;
    if (line.ends_with('+')) {
      positive = true;
      body = line.substr(0, line.size() - 1);
    } else if (line.ends_with('-')) {
      positive = false;
      body = line.substr(0, line.size() - 1);
    } else if (line.ends_with(kUnicodeMinus)) {
      positive = false;
      body = line.substr(0, line.size() - kUnicodeMinus.size());
    } else {
      throw ParseError(where + "missing '+' or '-' label");
    }
    try {
      items.push_back({parse_word(trim(body)), positive});
    } catch (const ParseError& e) {
      throw ParseError(where + e.what());
    }
    seen_word = true;
  }
  if (!n) {
    std::size_t max_id = 0;
    for (const auto& item : items)
      for (Symbol s : item.word) max_id = std::max<std::size_t>(max_id, id(s) + 1);
    n = std::max<std::size_t>(max_id, 1);
  }
  return assemble(*n, items);
}

Sample parse_abbadingo(const std::vector<std::string>& lines) {
  std::size_t ln = 0;
  while (ln < lines.size() && is_comment_or_blank(lines[ln])) ++ln;
  if (ln == lines.size()) throw ParseError("empty abbadingo file");
  const auto header = split_ws(trim(lines[ln]));
  std::size_t count = 0;
  std::size_t n = 0;
  if (header.size() != 2 || !parse_uint(header[0], count) || !parse_uint(header[1], n) || n == 0)
    throw ParseError("line " + std::to_string(ln + 1) + ": malformed header, expected '<words> <alphabet>'");
  ++ln;
  std::vector<Labelled> items;
  for (; ln < lines.size(); ++ln) {
    if (is_comment_or_blank(lines[ln])) continue;
    const std::string where = "line " + std::to_string(ln + 1) + ": ";
    const auto fields = split_ws(trim(lines[ln]));
    std::size_t label = 0;
    std::size_t len = 0;
    if (fields.size() < 2 || !parse_uint(fields[0], label) || !parse_uint(fields[1], len) || label > 1)
      throw ParseError(where + "expected '<0|1> <length> <symbols...>'");
    if (fields.size() != len + 2) throw ParseError(where + "length field does not match symbol count");
    Word w;
    for (std::size_t i = 0; i < len; ++i) {
      std::size_t s = 0;
      if (!parse_uint(fields[i + 2], s)) throw ParseError(where + "bad symbol '" + std::string(fields[i + 2]) + "'");
      if (s >= n) throw ParseError(where + "symbol id " + std::to_string(s) + " out of range");
      w.push_back(sym(static_cast<std::uint32_t>(s)));
    }
    items.push_back({std::move(w), label == 1});
  }
  if (items.size() != count)
    throw ParseError("header announces " + std::to_string(count) + " words but file has " +
                     std::to_string(items.size()));
  return assemble(n, items);
}

SampleFormat detect(const std::vector<std::string>& lines) {
  for (const auto& raw : lines) {
    std::string_view line = trim(raw);
    if (is_comment_or_blank(line)) continue;
    if (line.starts_with("n=") || line.ends_with('+') || line.ends_with('-') || line.ends_with(kUnicodeMinus))
      return SampleFormat::Plain;
    const auto fields = split_ws(line);
    std::size_t a = 0;
    std::size_t b = 0;
    if (fields.size() == 2 && parse_uint(fields[0], a) && parse_uint(fields[1], b)) return SampleFormat::Abbadingo;
    throw ParseError("cannot determine sample format from first line '" + std::string(line) + "'");
  }
  return SampleFormat::Plain;
}

}  // namespace

Word reversed(const Word& w) { return Word(w.rbegin(), w.rend()); }

std::string format_word(const Word& w, std::size_t alphabet_size) {
  std::string out;
  if (alphabet_size <= 26) {
    for (Symbol s : w) out.push_back(static_cast<char>('a' + id(s)));
    return out;
  }
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out.push_back(',');
    out += std::to_string(id(w[i]));
  }
  if (w.size() == 1) out.push_back(',');
  return out;
}

Word parse_word(std::string_view text) {
  Word w;
  if (text.find(',') != std::string_view::npos) {
    std::size_t start = 0;
    while (start <= text.size()) {
      auto end = text.find(',', start);
      if (end == std::string_view::npos) end = text.size();
      const auto token = trim(text.substr(start, end - start));
      if (!token.empty()) {
        std::size_t v = 0;
        if (!parse_uint(token, v) || v > UINT16_MAX) throw ParseError("bad symbol id '" + std::string(token) + "'");
        w.push_back(sym(static_cast<std::uint32_t>(v)));
      } else if (end != text.size()) {
        throw ParseError("empty symbol id in '" + std::string(text) + "'");
      }
      start = end + 1;
    }
    return w;
  }
  bool letters = false;
  bool digits = false;
  for (char c : text) {
    if (c >= 'a' && c <= 'z') {
      letters = true;
      w.push_back(sym(static_cast<std::uint32_t>(c - 'a')));
    } else if (c >= '0' && c <= '9') {
      digits = true;
      w.push_back(sym(static_cast<std::uint32_t>(c - '0')));
    } else {
      throw ParseError(std::string("unexpected character '") + c + "' in word");
    }
  }
  if (letters && digits) throw ParseError("word '" + std::string(text) + "' mixes letters and digits");
  return w;
}

Sample::Sample(std::size_t alphabet_size, WordSet positives, WordSet negatives)
    : alphabet_size_(alphabet_size), positives_(std::move(positives)), negatives_(std::move(negatives)) {
  if (alphabet_size_ == 0) throw InvalidArgument("alphabet size must be positive");
  for (const WordSet* set : {&positives_, &negatives_}) {
    for (const auto& w : *set)
      for (Symbol s : w)
        if (id(s) >= alphabet_size_)
          throw InvalidArgument("symbol id " + std::to_string(id(s)) + " out of range");
  }
  for (const auto& w : positives_)
    if (negatives_.contains(w)) throw InvalidArgument("word is both positive and negative");
  for (const auto& w : positives_)
    if (!w.empty()) splittable_.push_back(w);
  splittable_positives_ = splittable_.size();
  for (const auto& w : negatives_)
    if (!w.empty()) splittable_.push_back(w);
}

bool Sample::lambda_positive() const { return positives_.contains(Word{}); }
bool Sample::lambda_negative() const { return negatives_.contains(Word{}); }

WordSet Sample::all_words() const {
  WordSet all = positives_;
  all.insert(negatives_.begin(), negatives_.end());
  return all;
}

std::size_t Sample::total_length() const {
  std::size_t sigma = 0;
  for (const auto& w : positives_) sigma += w.size();
  for (const auto& w : negatives_) sigma += w.size();
  return sigma;
}

Sample parse_sample(std::istream& in, SampleFormat format, std::optional<std::size_t> alphabet_size) {
  const auto lines = read_lines(in);
  if (format == SampleFormat::Auto) format = detect(lines);
  if (format == SampleFormat::Abbadingo) return parse_abbadingo(lines);
  return parse_plain(lines, alphabet_size);
}

Sample parse_sample(std::string_view text, SampleFormat format, std::optional<std::size_t> alphabet_size) {
  std::istringstream in{std::string(text)};
  return parse_sample(in, format, alphabet_size);
}

Sample load_sample(const std::filesystem::path& path, SampleFormat format) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sample file " + path.string());
  return parse_sample(in, format);
}

void write_sample(std::ostream& out, const Sample& sample, SampleFormat format) {
  const auto n = sample.alphabet_size();
  if (format == SampleFormat::Abbadingo) {
    out << sample.size() << ' ' << n << '\n';
    auto emit = [&](const Word& w, int label) {
      out << label << ' ' << w.size();
      for (Symbol s : w) out << ' ' << id(s);
      out << '\n';
    };
    for (const auto& w : sample.positives()) emit(w, 1);
    for (const auto& w : sample.negatives()) emit(w, 0);
    return;
  }
  out << "n=" << n << '\n';
  for (const auto& w : sample.positives()) out << format_word(w, n) << "+\n";
  for (const auto& w : sample.negatives()) out << format_word(w, n) << "-\n";
}

std::string to_string(const Sample& sample, SampleFormat format) {
  std::ostringstream out;
  write_sample(out, sample, format);
  return out.str();
}

WordSet prefixes(const WordSet& words) {
  WordSet out;
  for (const auto& w : words)
    for (std::size_t len = 1; len <= w.size(); ++len) out.emplace(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(len));
  return out;
}

WordSet suffixes(const WordSet& words) {
  WordSet out;
  for (const auto& w : words)
    for (std::size_t start = 0; start < w.size(); ++start) out.emplace(w.begin() + static_cast<std::ptrdiff_t>(start), w.end());
  return out;
}

void validate_cuts(const Sample& sample, const SplitAssignment& cuts) {
  const auto& words = sample.splittable_words();
  if (cuts.cuts.size() != words.size())
    throw InvalidArgument("split assignment has " + std::to_string(cuts.cuts.size()) + " cuts for " +
                          std::to_string(words.size()) + " words");
  for (std::size_t i = 0; i < words.size(); ++i)
    if (cuts.cuts[i] > words[i].size())
      throw InvalidArgument("cut " + std::to_string(cuts.cuts[i]) + " out of range for word '" +
                            format_word(words[i], sample.alphabet_size()) + "'");
}

SplitAssignment all_prefix_cuts(const Sample& sample) {
  SplitAssignment a;
  for (const auto& w : sample.splittable_words()) a.cuts.push_back(static_cast<std::uint32_t>(w.size()));
  return a;
}

SplitAssignment all_suffix_cuts(const Sample& sample) {
  return SplitAssignment{std::vector<std::uint32_t>(sample.splittable_words().size(), 0)};
}

SplitSets split_sets(const Sample& sample, const SplitAssignment& cuts) {
  validate_cuts(sample, cuts);
  SplitSets out;
  const auto& words = sample.splittable_words();
  out.parts.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    const auto c = static_cast<std::ptrdiff_t>(cuts.cuts[i]);
    WordSplit part{Word(w.begin(), w.begin() + c), Word(w.begin() + c, w.end())};
    if (!part.prefix.empty()) out.prefixes.insert(part.prefix);
    if (!part.suffix.empty()) out.suffixes.insert(part.suffix);
    out.parts.push_back(std::move(part));
  }
  return out;
}

SplitAssignment read_cuts(std::istream& in, const Sample& sample) {
  std::map<Word, std::uint32_t> by_word;
  std::string line;
  std::size_t ln = 0;
  while (std::getline(in, line)) {
    ++ln;
    if (is_comment_or_blank(line)) continue;
    const auto fields = split_ws(trim(line));
    std::size_t cut = 0;
    if (fields.size() != 2 || !parse_uint(fields[1], cut))
      throw ParseError("cuts line " + std::to_string(ln) + ": expected '<word> <cut>'");
    by_word[parse_word(fields[0])] = static_cast<std::uint32_t>(cut);
  }
  SplitAssignment a;
  for (const auto& w : sample.splittable_words()) {
    auto it = by_word.find(w);
    if (it == by_word.end())
      throw ParseError("cuts file has no entry for word '" + format_word(w, sample.alphabet_size()) + "'");
    a.cuts.push_back(it->second);
  }
  validate_cuts(sample, a);
  return a;
}

void write_cuts(std::ostream& out, const Sample& sample, const SplitAssignment& cuts) {
  validate_cuts(sample, cuts);
  const auto& words = sample.splittable_words();
  for (std::size_t i = 0; i < words.size(); ++i)
    out << format_word(words[i], sample.alphabet_size()) << ' ' << cuts.cuts[i] << '\n';
}

std::size_t WordPool::Hash::operator()(const Word& w) const {
  std::size_t h = 1469598103934665603ull;
  for (Symbol s : w) h = (h ^ id(s)) * 1099511628211ull;
  return h ^ w.size();
}

WordId WordPool::intern(const Word& w) {
  auto [it, inserted] = ids_.try_emplace(w, static_cast<WordId>(words_.size()));
  if (inserted) words_.push_back(w);
  return it->second;
}

std::optional<WordId> WordPool::find(const Word& w) const {
  auto it = ids_.find(w);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

namespace {

class Trie {
 public:
  std::uint32_t child(std::uint32_t node, Symbol s) {
    auto [it, inserted] = edges_.try_emplace((static_cast<std::uint64_t>(node) << 16) | id(s), next_);
    if (inserted) ++next_;
    return it->second;
  }
  std::size_t nodes() const { return next_ - 1; }

 private:
  std::unordered_map<std::uint64_t, std::uint32_t> edges_;
  std::uint32_t next_ = 1;
};

// Node 0 is the root (the empty word); real nodes are numbered from 1.
constexpr std::uint32_t kRoot = 0;

}  // namespace

AffixIndex::AffixIndex(const Sample& sample) {
  Trie pref;
  Trie suf;
  std::size_t offset = 0;
  for (const auto& w : sample.splittable_words()) {
    lengths_.push_back(w.size());
    offsets_.push_back(offset);
    offset += w.size();
    std::uint32_t node = kRoot;
    for (Symbol s : w) {
      node = pref.child(node, s);
      prefix_path_.push_back(node - 1);
    }
    node = kRoot;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      node = suf.child(node, *it);
      suffix_path_.push_back(node - 1);
    }
  }
  prefix_nodes_total_ = pref.nodes();
  suffix_nodes_total_ = suf.nodes();
}

std::span<const std::uint32_t> AffixIndex::prefix_nodes(std::size_t word) const {
  return {prefix_path_.data() + offsets_[word], lengths_[word]};
}

std::span<const std::uint32_t> AffixIndex::suffix_nodes(std::size_t word) const {
  return {suffix_path_.data() + offsets_[word], lengths_[word]};
}

}  // namespace nfasat
