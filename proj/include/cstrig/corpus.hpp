#pragma once

// Token-level language-annotated bilingual corpora: the canonical on-disk
// format, tag normalization, and structural validation.
//
// Canonical corpus file (UTF-8, LF line endings):
//   token<TAB>tag          one token per line
//   <blank line>           ends the current utterance
//   # pair = l1-l2         corpus header, before the first utterance
//   # source = <label>     corpus header, optional
//   # id = <string>        utterance metadata, precedes its tokens
//   # turn = <string>      utterance metadata, optional
//
// Tag grammar:
//   lang:<code> | shared:<code> | shared:other | mix | other | punct |
//   emoji | hashtag
// where <code> is a 2-3 character lowercase ASCII language code.

#include <cctype>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cstrig {

class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Raw source tag with no entry in the active TagMapping.
class MappingError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Normalized tag that violates the language-pair schema.
class SchemaError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class FileError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline bool is_language_code(std::string_view s) {
  if (s.size() < 2 || s.size() > 3) return false;
  for (char c : s)
    if (c < 'a' || c > 'z') return false;
  return true;
}

struct LanguagePair {
  std::string l1;
  std::string l2;
  std::string name;

  bool valid() const {
    return is_language_code(l1) && is_language_code(l2) && l1 != l2;
  }
  bool contains(std::string_view code) const { return code == l1 || code == l2; }
  std::string other(std::string_view code) const { return code == l1 ? l2 : l1; }

  bool operator==(const LanguagePair&) const = default;
};

enum class TagKind { Lang, Shared, SharedOther, Mix, Neutral };
enum class NeutralKind { Other, Punct, Emoji, Hashtag };

struct Tag {
  TagKind kind = TagKind::Neutral;
  std::string code;  // language code; Lang and Shared only
  NeutralKind neutral_kind = NeutralKind::Other;

  static Tag lang(std::string c) { return {TagKind::Lang, std::move(c), NeutralKind::Other}; }
  static Tag shared(std::string c) { return {TagKind::Shared, std::move(c), NeutralKind::Other}; }
  static Tag shared_other() { return {TagKind::SharedOther, {}, NeutralKind::Other}; }
  static Tag mix() { return {TagKind::Mix, {}, NeutralKind::Other}; }
  static Tag neutral(NeutralKind k) { return {TagKind::Neutral, {}, k}; }

  bool is_shared_kind() const { return kind == TagKind::Shared || kind == TagKind::SharedOther; }
  bool is_lang(std::string_view c) const { return kind == TagKind::Lang && code == c; }
  bool is_pair_lang(const LanguagePair& p) const {
    return kind == TagKind::Lang && p.contains(code);
  }

  bool operator==(const Tag&) const = default;
};

inline std::optional<Tag> parse_tag(std::string_view s) {
  if (s == "mix") return Tag::mix();
  if (s == "other") return Tag::neutral(NeutralKind::Other);
  if (s == "punct") return Tag::neutral(NeutralKind::Punct);
  if (s == "emoji") return Tag::neutral(NeutralKind::Emoji);
  if (s == "hashtag") return Tag::neutral(NeutralKind::Hashtag);
  if (s.rfind("lang:", 0) == 0) {
    auto code = s.substr(5);
    if (!is_language_code(code)) return std::nullopt;
    return Tag::lang(std::string(code));
  }
  if (s.rfind("shared:", 0) == 0) {
    auto rest = s.substr(7);
    if (rest == "other") return Tag::shared_other();
    if (!is_language_code(rest)) return std::nullopt;
    return Tag::shared(std::string(rest));
  }
  return std::nullopt;
}

inline std::string to_string(const Tag& t) {
  switch (t.kind) {
    case TagKind::Lang: return "lang:" + t.code;
    case TagKind::Shared: return "shared:" + t.code;
    case TagKind::SharedOther: return "shared:other";
    case TagKind::Mix: return "mix";
    case TagKind::Neutral:
      switch (t.neutral_kind) {
        case NeutralKind::Other: return "other";
        case NeutralKind::Punct: return "punct";
        case NeutralKind::Emoji: return "emoji";
        case NeutralKind::Hashtag: return "hashtag";
      }
  }
  return "other";
}

struct Token {
  std::string text;
  Tag tag;

  bool operator==(const Token&) const = default;
};

struct Utterance {
  std::string id;
  std::string turn_id;
  std::vector<Token> tokens;

  bool operator==(const Utterance&) const = default;
};

struct Corpus {
  LanguagePair pair;
  std::vector<Utterance> utterances;
  std::string source_label;

  bool operator==(const Corpus&) const = default;
};

// Closed translation table from raw source-scheme tags to normalized tags.
// Parsing fails on any raw tag the mapping does not cover; canonical mode
// covers exactly the canonical tag grammar.
class TagMapping {
public:
  static TagMapping canonical() { return TagMapping(true); }

  static TagMapping from_entries(std::map<std::string, Tag> entries) {
    TagMapping m(false);
    m.entries_ = std::move(entries);
    return m;
  }

  // Mapping file: lines `raw<TAB>normalized-tag`; blank lines and lines
  // starting with '#' are ignored.
  static TagMapping parse(std::istream& in) {
    TagMapping m(false);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line.front() == '#') continue;
      auto tab = line.find('\t');
      if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
        throw ParseError("mapping line " + std::to_string(line_no) +
                         ": expected `raw<TAB>tag`");
      std::string raw = line.substr(0, tab);
      std::string tag_str = line.substr(tab + 1);
      auto tag = parse_tag(tag_str);
      if (!tag)
        throw ParseError("mapping line " + std::to_string(line_no) +
                         ": not a canonical tag: '" + tag_str + "'");
      if (!m.entries_.emplace(std::move(raw), *tag).second)
        throw ParseError("mapping line " + std::to_string(line_no) +
                         ": duplicate raw tag");
    }
    return m;
  }

  std::optional<Tag> map(const std::string& raw) const {
    if (canonical_) return parse_tag(raw);
    auto it = entries_.find(raw);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
  }

  bool is_canonical() const { return canonical_; }

private:
  explicit TagMapping(bool canonical) : canonical_(canonical) {}
  bool canonical_ = true;
  std::map<std::string, Tag> entries_;
};

namespace detail {

inline std::optional<LanguagePair> parse_pair_value(std::string_view v) {
  auto dash = v.find('-');
  if (dash == std::string_view::npos) return std::nullopt;
  std::string a(v.substr(0, dash)), b(v.substr(dash + 1));
  LanguagePair p{a, b, ""};
  if (!p.valid()) return std::nullopt;
  for (char c : a) p.name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  p.name += '-';
  for (char c : b) p.name += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return p;
}

// `# key = value` with a closed key vocabulary. Returns (key, value).
inline std::pair<std::string, std::string> parse_metadata_line(const std::string& line,
                                                               std::size_t line_no) {
  // line is known to start with '#'
  std::string_view rest(line);
  rest.remove_prefix(1);
  if (rest.empty() || rest.front() != ' ')
    throw ParseError("line " + std::to_string(line_no) + ": malformed metadata line");
  rest.remove_prefix(1);
  auto eq = rest.find(" = ");
  if (eq == std::string_view::npos)
    throw ParseError("line " + std::to_string(line_no) + ": malformed metadata line");
  std::string key(rest.substr(0, eq));
  std::string value(rest.substr(eq + 3));
  if (key != "pair" && key != "source" && key != "id" && key != "turn")
    throw ParseError("line " + std::to_string(line_no) + ": unknown metadata key '" + key + "'");
  if (value.empty())
    throw ParseError("line " + std::to_string(line_no) + ": empty metadata value");
  return {key, value};
}

struct ParsedFile {
  std::optional<LanguagePair> header_pair;
  std::string source_label;
  std::vector<Utterance> utterances;
  // Raw tag strings per utterance, parallel to tokens; mapped in a second step.
  std::vector<std::vector<std::string>> raw_tags;
};

inline ParsedFile parse_file_structure(std::istream& in) {
  ParsedFile out;
  std::string line;
  std::size_t line_no = 0;
  bool first_line = true;
  bool seen_content = false;  // any utterance metadata or token so far

  std::optional<std::string> pending_id, pending_turn;
  std::vector<Token> tokens;
  std::vector<std::string> tags;
  std::size_t auto_id = 0;

  auto flush = [&](bool at_eof) {
    if (tokens.empty()) {
      if (pending_id || pending_turn)
        throw ParseError("line " + std::to_string(line_no) +
                         ": utterance metadata without tokens" +
                         (at_eof ? " at end of input" : ""));
      return;
    }
    Utterance u;
    u.id = pending_id ? *pending_id : "u" + std::to_string(auto_id);
    u.turn_id = pending_turn.value_or("");
    u.tokens = std::move(tokens);
    out.utterances.push_back(std::move(u));
    out.raw_tags.push_back(std::move(tags));
    tokens.clear();
    tags.clear();
    pending_id.reset();
    pending_turn.reset();
    ++auto_id;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first_line && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
      line.erase(0, 3);
    first_line = false;

    if (line.empty()) {
      flush(false);
      continue;
    }

    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      if (line.front() != '#')
        throw ParseError("line " + std::to_string(line_no) + ": malformed line (no tab)");
      auto [key, value] = parse_metadata_line(line, line_no);
      if (key == "pair" || key == "source") {
        if (seen_content || !tokens.empty() || pending_id || pending_turn ||
            !out.utterances.empty())
          throw ParseError("line " + std::to_string(line_no) + ": '# " + key +
                           "' header after utterance content");
        if (key == "pair") {
          if (out.header_pair)
            throw ParseError("line " + std::to_string(line_no) + ": duplicate pair header");
          auto p = parse_pair_value(value);
          if (!p)
            throw ParseError("line " + std::to_string(line_no) +
                             ": invalid pair value '" + value + "'");
          out.header_pair = *p;
        } else {
          if (!out.source_label.empty())
            throw ParseError("line " + std::to_string(line_no) + ": duplicate source header");
          out.source_label = value;
        }
        continue;
      }
      seen_content = true;
      if (!tokens.empty())
        throw ParseError("line " + std::to_string(line_no) + ": metadata after tokens");
      auto& slot = (key == "id") ? pending_id : pending_turn;
      if (slot)
        throw ParseError("line " + std::to_string(line_no) + ": duplicate '# " + key + "'");
      slot = value;
      continue;
    }

    // token line
    seen_content = true;
    std::string text = line.substr(0, tab);
    std::string raw = line.substr(tab + 1);
    if (text.empty())
      throw ParseError("line " + std::to_string(line_no) + ": empty token text");
    if (raw.empty() || raw.find('\t') != std::string::npos)
      throw ParseError("line " + std::to_string(line_no) + ": malformed tag field");
    tokens.push_back(Token{std::move(text), Tag{}});
    tags.push_back(std::move(raw));
  }
  ++line_no;
  flush(true);
  return out;
}

}  // namespace detail

// "l1-l2" -> LanguagePair with an uppercased default name.
inline std::optional<LanguagePair> parse_language_pair(std::string_view s) {
  return detail::parse_pair_value(s);
}

// Parses the canonical format, normalizing tags through `mapping`. One
// utterance per blank-line-delimited block, tokens in file order. A file
// `# pair` header must agree with `pair` when present.
inline Corpus parse_corpus(std::istream& in, const LanguagePair& pair,
                           const TagMapping& mapping = TagMapping::canonical()) {
  if (!pair.valid())
    throw SchemaError("invalid language pair '" + pair.l1 + "'-'" + pair.l2 + "'");
  auto file = detail::parse_file_structure(in);
  if (file.header_pair &&
      (file.header_pair->l1 != pair.l1 || file.header_pair->l2 != pair.l2))
    throw SchemaError("file pair header " + file.header_pair->l1 + "-" +
                      file.header_pair->l2 + " does not match expected " + pair.l1 +
                      "-" + pair.l2);

  Corpus c;
  c.pair = pair;
  c.source_label = std::move(file.source_label);
  c.utterances = std::move(file.utterances);
  for (std::size_t ui = 0; ui < c.utterances.size(); ++ui) {
    auto& u = c.utterances[ui];
    for (std::size_t ti = 0; ti < u.tokens.size(); ++ti) {
      const std::string& raw = file.raw_tags[ui][ti];
      auto tag = mapping.map(raw);
      if (!tag)
        throw MappingError("unmapped tag '" + raw + "' (utterance " + u.id + ")");
      if (tag->kind == TagKind::Shared && !pair.contains(tag->code))
        throw SchemaError("shared tag code '" + tag->code + "' outside pair " +
                          pair.l1 + "-" + pair.l2 + " (utterance " + u.id + ")");
      u.tokens[ti].tag = *tag;
    }
  }
  return c;
}

inline Corpus parse_corpus(const std::string& text, const LanguagePair& pair,
                           const TagMapping& mapping = TagMapping::canonical()) {
  std::istringstream in(text);
  return parse_corpus(in, pair, mapping);
}

// Parse pulling the pair from the file header; `pair_override` wins when
// given. A file with no tokens needs no pair at all.
inline Corpus parse_corpus_auto(std::istream& in,
                                const TagMapping& mapping = TagMapping::canonical(),
                                std::optional<LanguagePair> pair_override = {}) {
  auto file = detail::parse_file_structure(in);
  std::optional<LanguagePair> pair = pair_override ? pair_override : file.header_pair;
  if (pair_override && file.header_pair &&
      (file.header_pair->l1 != pair_override->l1 ||
       file.header_pair->l2 != pair_override->l2))
    throw SchemaError("file pair header " + file.header_pair->l1 + "-" +
                      file.header_pair->l2 + " does not match requested " +
                      pair_override->l1 + "-" + pair_override->l2);
  if (!pair) {
    if (!file.utterances.empty())
      throw SchemaError(
          "language pair unknown: no `# pair = l1-l2` header and no override");
    pair = LanguagePair{"xx", "yy", "XX-YY"};  // empty corpus; never observable
  }

  Corpus c;
  c.pair = *pair;
  c.source_label = std::move(file.source_label);
  c.utterances = std::move(file.utterances);
  for (std::size_t ui = 0; ui < c.utterances.size(); ++ui) {
    auto& u = c.utterances[ui];
    for (std::size_t ti = 0; ti < u.tokens.size(); ++ti) {
      const std::string& raw = file.raw_tags[ui][ti];
      auto tag = mapping.map(raw);
      if (!tag)
        throw MappingError("unmapped tag '" + raw + "' (utterance " + u.id + ")");
      if (tag->kind == TagKind::Shared && !c.pair.contains(tag->code))
        throw SchemaError("shared tag code '" + tag->code + "' outside pair " +
                          c.pair.l1 + "-" + c.pair.l2 + " (utterance " + u.id + ")");
      u.tokens[ti].tag = *tag;
    }
  }
  return c;
}

// Canonical serialization: pair/source header, then per utterance `# id`,
// optional `# turn`, token lines, one blank line. parse(serialize(c)) == c
// and serialize is a byte-exact fixed point of the round trip.
inline void serialize_corpus(const Corpus& c, std::ostream& out) {
  auto check_field = [](const std::string& s, const char* what) {
    if (s.find('\t') != std::string::npos || s.find('\n') != std::string::npos ||
        s.find('\r') != std::string::npos)
      throw SchemaError(std::string("cannot serialize: ") + what +
                        " contains tab or newline");
  };
  out << "# pair = " << c.pair.l1 << "-" << c.pair.l2 << "\n";
  if (!c.source_label.empty()) {
    check_field(c.source_label, "source label");
    out << "# source = " << c.source_label << "\n";
  }
  for (const auto& u : c.utterances) {
    check_field(u.id, "utterance id");
    out << "# id = " << u.id << "\n";
    if (!u.turn_id.empty()) {
      check_field(u.turn_id, "turn id");
      out << "# turn = " << u.turn_id << "\n";
    }
    for (const auto& t : u.tokens) {
      check_field(t.text, "token text");
      out << t.text << '\t' << to_string(t.tag) << "\n";
    }
    out << "\n";
  }
}

inline std::string serialize_corpus(const Corpus& c) {
  std::ostringstream out;
  serialize_corpus(c, out);
  return out.str();
}

struct ValidationIssue {
  std::string code;          // e.g. "duplicate-id", "out-of-pair-shared"
  std::string utterance_id;  // empty for corpus-level issues
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

// Structural invariant scan; empty report iff the corpus is valid.
inline ValidationReport validate_corpus(const Corpus& c) {
  ValidationReport r;
  if (!c.pair.valid())
    r.issues.push_back({"invalid-pair", "",
                        "language pair '" + c.pair.l1 + "'-'" + c.pair.l2 +
                            "' is not two distinct 2-3 letter lowercase codes"});
  std::map<std::string, std::size_t> id_counts;
  for (const auto& u : c.utterances) ++id_counts[u.id];
  for (const auto& [id, n] : id_counts)
    if (n > 1)
      r.issues.push_back({"duplicate-id", id,
                          "utterance id occurs " + std::to_string(n) + " times"});
  for (const auto& u : c.utterances) {
    if (u.id.empty()) r.issues.push_back({"empty-id", u.id, "utterance with empty id"});
    if (u.tokens.empty()) {
      r.issues.push_back({"empty-utterance", u.id, "utterance has no tokens"});
      continue;
    }
    for (std::size_t i = 0; i < u.tokens.size(); ++i) {
      const auto& t = u.tokens[i];
      if (t.text.empty())
        r.issues.push_back({"empty-token", u.id,
                            "token " + std::to_string(i) + " has empty text"});
      if ((t.tag.kind == TagKind::Lang || t.tag.kind == TagKind::Shared) &&
          !is_language_code(t.tag.code))
        r.issues.push_back({"invalid-code", u.id,
                            "token " + std::to_string(i) + " carries invalid code '" +
                                t.tag.code + "'"});
      if (t.tag.kind == TagKind::Shared && !c.pair.contains(t.tag.code))
        r.issues.push_back({"out-of-pair-shared", u.id,
                            "token " + std::to_string(i) + " shared code '" +
                                t.tag.code + "' outside pair"});
    }
  }
  return r;
}

}  // namespace cstrig
