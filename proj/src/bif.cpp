#include "yodo/bif.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace yodo {

namespace {

struct Token {
  enum Kind { word, punct, end };
  Kind kind = end;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(tok_.line, tok_.col, msg);
  }

  /// Raw text (trimmed) up to the next ';', consumed along with it.
  /// Used for `property` statements, which are free-form.
  std::string raw_until_semicolon() {
    // The current token is the first piece of the raw text; rewind to its
    // start within the source and scan forward.
    size_t start = tok_.offset;
    size_t i = start;
    while (i < text_.size() && text_[i] != ';') ++i;
    if (i >= text_.size()) fail("unterminated property (missing ';')");
    std::string raw(text_.substr(start, i - start));
    while (!raw.empty() && (raw.back() == ' ' || raw.back() == '\t')) raw.pop_back();
    // Re-sync the cursor past the semicolon.
    pos_ = i + 1;
    line_ = tok_.line;
    col_ = tok_.col;
    for (size_t k = start; k < pos_; ++k) bump_pos(text_[k]);
    advance();
    return raw;
  }

 private:
  void bump_pos(char c) {
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump_pos(c);
        ++pos_;
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') {
          bump_pos(text_[pos_]);
          ++pos_;
        }
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        const int l = line_, co = col_;
        bump_pos(text_[pos_]); ++pos_;
        bump_pos(text_[pos_]); ++pos_;
        bool closed = false;
        while (pos_ < text_.size()) {
          if (text_[pos_] == '*' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
            bump_pos(text_[pos_]); ++pos_;
            bump_pos(text_[pos_]); ++pos_;
            closed = true;
            break;
          }
          bump_pos(text_[pos_]);
          ++pos_;
        }
        if (!closed) throw ParseError(l, co, "unterminated comment");
      } else {
        break;
      }
    }
  }

  static bool is_punct(char c) {
    switch (c) {
      case '{': case '}': case '(': case ')': case '[': case ']':
      case '|': case ';': case ',':
        return true;
      default:
        return false;
    }
  }

  void advance() {
    skip_space_and_comments();
    tok_.line = line_;
    tok_.col = col_;
    tok_.offset = pos_;
    if (pos_ >= text_.size()) {
      tok_.kind = Token::end;
      tok_.text.clear();
      return;
    }
    const char c = text_[pos_];
    if (is_punct(c)) {
      tok_.kind = Token::punct;
      tok_.text.assign(1, c);
      bump_pos(c);
      ++pos_;
      return;
    }
    if (c == '"') {
      bump_pos(c);
      ++pos_;
      std::string s;
      while (pos_ < text_.size() && text_[pos_] != '"' && text_[pos_] != '\n') {
        s.push_back(text_[pos_]);
        bump_pos(text_[pos_]);
        ++pos_;
      }
      if (pos_ >= text_.size() || text_[pos_] != '"')
        throw ParseError(tok_.line, tok_.col, "unterminated string");
      bump_pos(text_[pos_]);
      ++pos_;
      tok_.kind = Token::word;
      tok_.text = std::move(s);
      return;
    }
    std::string s;
    while (pos_ < text_.size()) {
      const char d = text_[pos_];
      if (is_punct(d) || d == ' ' || d == '\t' || d == '\r' || d == '\n' || d == '"')
        break;
      s.push_back(d);
      bump_pos(d);
      ++pos_;
    }
    tok_.kind = Token::word;
    tok_.text = std::move(s);
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;

 public:
  struct Tok : Token {
    size_t offset = 0;
  };

 private:
  Tok tok_;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lx_(text) {}

  NetworkParts parse() {
    NetworkParts parts;
    bool saw_network = false;
    while (lx_.peek().kind != Token::end) {
      const Token t = expect_word("'network', 'variable' or 'probability'");
      if (t.text == "network") {
        if (saw_network) fail_at(t, "duplicate network block");
        saw_network = true;
        parse_network(parts);
      } else if (t.text == "variable") {
        parse_variable(parts);
      } else if (t.text == "probability") {
        parse_probability(parts);
      } else {
        fail_at(t, "expected 'network', 'variable' or 'probability', got '" + t.text + "'");
      }
    }
    if (parts.variables.empty()) throw ParseError(1, 1, "input declares no variables");
    // Align cpts[v] with variables[v]; every variable needs exactly one.
    std::vector<Cpt> ordered(parts.variables.size());
    std::vector<char> have(parts.variables.size(), 0);
    for (Cpt& c : raw_cpts_) {
      if (have[static_cast<size_t>(c.child)])
        throw ParseError(c.def_line, 1, "duplicate probability block for variable '" +
                                            parts.variables[static_cast<size_t>(c.child)].name + "'");
      have[static_cast<size_t>(c.child)] = 1;
      ordered[static_cast<size_t>(c.child)] = std::move(c);
    }
    for (size_t v = 0; v < parts.variables.size(); ++v) {
      if (!have[v])
        throw ParseError(parts.variables[v].def_line, 1,
                         "no probability block for variable '" + parts.variables[v].name + "'");
    }
    parts.cpts = std::move(ordered);
    return parts;
  }

 private:
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) {
    throw ParseError(t.line, t.col, msg);
  }

  Token expect_word(const std::string& what) {
    Token t = lx_.take();
    if (t.kind != Token::word) fail_at(t, "expected " + what);
    return t;
  }

  Token expect_punct(char c) {
    Token t = lx_.take();
    if (t.kind != Token::punct || t.text[0] != c)
      fail_at(t, std::string("expected '") + c + "'");
    return t;
  }

  bool try_punct(char c) {
    if (lx_.peek().kind == Token::punct && lx_.peek().text[0] == c) {
      lx_.take();
      return true;
    }
    return false;
  }

  double expect_number(const std::string& what) {
    Token t = expect_word(what);
    const char* s = t.text.c_str();
    char* end = nullptr;
    const double v = std::strtod(s, &end);
    if (end != s + t.text.size() || t.text.empty())
      fail_at(t, "expected " + what + ", got '" + t.text + "'");
    return v;
  }

  int expect_int(const std::string& what) {
    Token t = expect_word(what);
    char* end = nullptr;
    const long v = std::strtol(t.text.c_str(), &end, 10);
    if (end != t.text.c_str() + t.text.size() || t.text.empty() || v < 0)
      fail_at(t, "expected " + what + ", got '" + t.text + "'");
    return static_cast<int>(v);
  }

  void parse_network(NetworkParts& parts) {
    parts.name = expect_word("network name").text;
    expect_punct('{');
    while (!try_punct('}')) {
      const Token t = expect_word("'property' or '}'");
      if (t.text == "property") {
        parts.properties.push_back(lx_.raw_until_semicolon());
      } else {
        fail_at(t, "unexpected '" + t.text + "' in network block");
      }
    }
  }

  void parse_variable(NetworkParts& parts) {
    const Token name = expect_word("variable name");
    if (var_index_.count(name.text)) fail_at(name, "duplicate variable '" + name.text + "'");
    Variable var;
    var.name = name.text;
    var.def_line = name.line;
    expect_punct('{');
    bool saw_type = false;
    while (!try_punct('}')) {
      const Token t = expect_word("'type', 'property' or '}'");
      if (t.text == "type") {
        if (saw_type) fail_at(t, "duplicate type declaration");
        saw_type = true;
        const Token kind = expect_word("'discrete'");
        if (kind.text != "discrete") fail_at(kind, "only discrete variables are supported");
        expect_punct('[');
        const int card = expect_int("state count");
        expect_punct(']');
        expect_punct('{');
        while (!try_punct('}')) {
          var.states.push_back(expect_word("state name").text);
          try_punct(',');
        }
        if (static_cast<int>(var.states.size()) != card)
          fail_at(t, "variable declares " + std::to_string(card) + " states but lists " +
                         std::to_string(var.states.size()));
        expect_punct(';');
      } else if (t.text == "property") {
        var.properties.push_back(lx_.raw_until_semicolon());
      } else {
        fail_at(t, "unexpected '" + t.text + "' in variable block");
      }
    }
    if (!saw_type) fail_at(name, "variable '" + name.text + "' has no type declaration");
    var_index_[var.name] = static_cast<int>(parts.variables.size());
    parts.variables.push_back(std::move(var));
  }

  int lookup_variable(const NetworkParts& parts, const Token& t) {
    auto it = var_index_.find(t.text);
    if (it == var_index_.end()) fail_at(t, "unknown variable '" + t.text + "'");
    (void)parts;
    return it->second;
  }

  void parse_probability(NetworkParts& parts) {
    const Token open = expect_punct('(');
    const Token child_tok = expect_word("variable name");
    const int child = lookup_variable(parts, child_tok);
    Cpt cpt;
    cpt.child = child;
    cpt.def_line = open.line;
    if (try_punct('|')) {
      while (true) {
        const Token p = expect_word("parent name");
        cpt.parents.push_back(lookup_variable(parts, p));
        if (!try_punct(',')) break;
      }
    }
    expect_punct(')');

    const Variable& cv = parts.variables[static_cast<size_t>(child)];
    const int card = cv.card();
    int64_t configs = 1;
    for (int p : cpt.parents) configs *= parts.variables[static_cast<size_t>(p)].card();
    cpt.table.assign(static_cast<size_t>(configs * card), -1.0);
    std::vector<char> filled(static_cast<size_t>(configs), 0);

    expect_punct('{');
    while (!try_punct('}')) {
      if (lx_.peek().kind == Token::punct && lx_.peek().text[0] == '(') {
        // Row keyed by an explicit parent state tuple; entries are the
        // child state probabilities in declaration order.
        const Token row = lx_.take();
        if (cpt.parents.empty()) fail_at(row, "state tuple row in a parentless table");
        std::vector<int> coords;
        while (!try_punct(')')) {
          const Token st = expect_word("parent state");
          const size_t k = coords.size();
          if (k >= cpt.parents.size()) fail_at(st, "tuple lists too many parent states");
          const Variable& pv = parts.variables[static_cast<size_t>(cpt.parents[k])];
          int si = -1;
          for (int s = 0; s < pv.card(); ++s)
            if (pv.states[static_cast<size_t>(s)] == st.text) si = s;
          if (si < 0)
            fail_at(st, "variable '" + pv.name + "' has no state '" + st.text + "'");
          coords.push_back(si);
          try_punct(',');
        }
        if (coords.size() != cpt.parents.size())
          fail_at(row, "tuple lists " + std::to_string(coords.size()) + " states, expected " +
                           std::to_string(cpt.parents.size()));
        int64_t cfg = 0;
        for (size_t k = 0; k < coords.size(); ++k)
          cfg = cfg * parts.variables[static_cast<size_t>(cpt.parents[k])].card() + coords[k];
        if (filled[static_cast<size_t>(cfg)])
          fail_at(row, "duplicate row for the same parent configuration");
        filled[static_cast<size_t>(cfg)] = 1;
        for (int s = 0; s < card; ++s) {
          cpt.table[static_cast<size_t>(cfg * card + s)] = expect_number("probability");
          try_punct(',');
        }
        expect_punct(';');
      } else {
        const Token t = expect_word("'table', a state tuple or 'property'");
        if (t.text == "table") {
          // Flat layout: child state slowest, then parent configurations
          // row-major with the last parent fastest.
          std::vector<double> flat;
          flat.reserve(static_cast<size_t>(configs * card));
          while (!(lx_.peek().kind == Token::punct && lx_.peek().text[0] == ';')) {
            flat.push_back(expect_number("probability"));
            try_punct(',');
          }
          expect_punct(';');
          if (static_cast<int64_t>(flat.size()) != configs * card)
            fail_at(t, "table lists " + std::to_string(flat.size()) + " values, expected " +
                           std::to_string(configs * card));
          for (int s = 0; s < card; ++s)
            for (int64_t cfg = 0; cfg < configs; ++cfg)
              cpt.table[static_cast<size_t>(cfg * card + s)] =
                  flat[static_cast<size_t>(static_cast<int64_t>(s) * configs + cfg)];
          for (int64_t cfg = 0; cfg < configs; ++cfg) {
            if (filled[static_cast<size_t>(cfg)])
              fail_at(t, "table overlaps previously filled rows");
            filled[static_cast<size_t>(cfg)] = 1;
          }
        } else if (t.text == "property") {
          cpt.properties.push_back(lx_.raw_until_semicolon());
        } else {
          fail_at(t, "unexpected '" + t.text + "' in probability block");
        }
      }
    }
    for (int64_t cfg = 0; cfg < configs; ++cfg) {
      if (!filled[static_cast<size_t>(cfg)])
        throw ParseError(cpt.def_line, open.col,
                         "probability block for '" + cv.name +
                             "' leaves parent configuration " + std::to_string(cfg) +
                             " undefined");
    }
    raw_cpts_.push_back(std::move(cpt));
  }

  Lexer lx_;
  std::map<std::string, int> var_index_;
  std::vector<Cpt> raw_cpts_;
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

NetworkParts parse_bif_parts(std::string_view text) { return Parser(text).parse(); }

BayesianNetwork parse_bif(std::string_view text) {
  return BayesianNetwork::build(parse_bif_parts(text));
}

BayesianNetwork load_bif_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_bif(ss.str());
}

std::string write_bif(const NetworkParts& parts) {
  std::ostringstream os;
  os << "network " << (parts.name.empty() ? "unnamed" : parts.name) << " {\n";
  for (const std::string& p : parts.properties) os << "  property " << p << ";\n";
  os << "}\n";
  for (const Variable& v : parts.variables) {
    os << "variable " << v.name << " {\n";
    os << "  type discrete [ " << v.card() << " ] { ";
    for (int s = 0; s < v.card(); ++s)
      os << (s ? ", " : "") << v.states[static_cast<size_t>(s)];
    os << " };\n";
    for (const std::string& p : v.properties) os << "  property " << p << ";\n";
    os << "}\n";
  }
  for (const Cpt& c : parts.cpts) {
    const Variable& cv = parts.variables[static_cast<size_t>(c.child)];
    os << "probability ( " << cv.name;
    if (!c.parents.empty()) {
      os << " | ";
      for (size_t i = 0; i < c.parents.size(); ++i)
        os << (i ? ", " : "") << parts.variables[static_cast<size_t>(c.parents[i])].name;
    }
    os << " ) {\n";
    for (const std::string& p : c.properties) os << "  property " << p << ";\n";
    const int card = cv.card();
    if (c.parents.empty()) {
      os << "  table ";
      for (int s = 0; s < card; ++s)
        os << (s ? ", " : "") << format_double(c.table[static_cast<size_t>(s)]);
      os << ";\n";
    } else {
      int64_t configs = 1;
      for (int p : c.parents) configs *= parts.variables[static_cast<size_t>(p)].card();
      std::vector<int> coords(c.parents.size(), 0);
      for (int64_t cfg = 0; cfg < configs; ++cfg) {
        os << "  (";
        for (size_t k = 0; k < c.parents.size(); ++k) {
          const Variable& pv = parts.variables[static_cast<size_t>(c.parents[k])];
          os << (k ? ", " : "") << pv.states[static_cast<size_t>(coords[k])];
        }
        os << ") ";
        for (int s = 0; s < card; ++s)
          os << (s ? ", " : "") << format_double(c.table[static_cast<size_t>(cfg * card + s)]);
        os << ";\n";
        for (size_t k = c.parents.size(); k-- > 0;) {
          const Variable& pv = parts.variables[static_cast<size_t>(c.parents[k])];
          if (++coords[k] < pv.card()) break;
          coords[k] = 0;
        }
      }
    }
    os << "}\n";
  }
  return os.str();
}

std::string write_bif(const BayesianNetwork& bn) { return write_bif(bn.parts()); }

}  // namespace yodo
