#include "netforge/readers.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_codec.hpp"
#include "netforge/error.hpp"

namespace netforge {

using detail::json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Parameter files

ParamFile read_param_file(std::string_view json_text) {
  const json doc = detail::parse_json(json_text);
  if (!doc.is_object()) throw SchemaError(Errc::SchemaError, "", "parameter file must be an object of devices");
  ParamFile out;
  for (const auto& [device, corners] : doc.items()) {
    const std::string dpath = "/" + detail::pointer_escape(device);
    if (!corners.is_object()) throw SchemaError(Errc::SchemaError, dpath, "expected an object of corners");
    ParamSet set;
    for (const auto& [name, params] : corners.items()) {
      set.set(name, detail::params_from_json(params, dpath + "/" + detail::pointer_escape(name)));
    }
    out.set(device, std::move(set));
  }
  return out;
}

ParamFile read_param_file(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return read_param_file(ss.str());
}

ParamFile read_param_file_path(const std::string& path) { return read_param_file(read_text_file(path)); }

// ---------------------------------------------------------------------------
// SPICE .model cards

namespace {

struct Card {
  std::size_t line;
  std::string text;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<Card> logical_lines(std::string_view text) {
  std::vector<Card> cards;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string line(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (auto semi = line.find(';'); semi != std::string::npos) line.erase(semi);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '*') continue;
    if (line[first] == '+') {
      if (cards.empty()) throw ParseError(line_no, "continuation line without a preceding card");
      cards.back().text += ' ';
      cards.back().text += line.substr(first + 1);
      continue;
    }
    cards.push_back({line_no, line.substr(first)});
  }
  return cards;
}

std::vector<std::string> tokenize_card(const Card& card) {
  std::vector<std::string> tokens;
  const std::string& s = card.text;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
      ++i;
    } else if (c == '(' || c == ')' || c == '=') {
      tokens.emplace_back(1, c);
      ++i;
    } else if (c == '{' || c == '\'') {
      const char close = c == '{' ? '}' : '\'';
      const std::size_t end = s.find(close, i + 1);
      if (end == std::string::npos) throw ParseError(card.line, std::string("unterminated '") + c + "'");
      tokens.push_back(s.substr(i, end - i + 1));
      i = end + 1;
    } else {
      std::size_t j = i;
      while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' && s[j] != ')' &&
             s[j] != '=' && s[j] != ',') {
        ++j;
      }
      tokens.push_back(s.substr(i, j - i));
      i = j;
    }
  }
  return tokens;
}

bool is_punct(const std::string& t) { return t == "(" || t == ")" || t == "="; }

Model parse_model_card(const Card& card) {
  const auto tokens = tokenize_card(card);
  if (tokens.size() < 3 || is_punct(tokens[1]) || is_punct(tokens[2])) {
    throw ParseError(card.line, ".model needs a name and a type");
  }
  Params params;
  int depth = 0;
  std::size_t i = 3;
  while (i < tokens.size()) {
    const std::string& t = tokens[i];
    if (t == "(") {
      if (depth > 0) throw ParseError(card.line, "nested '('");
      ++depth;
      ++i;
      continue;
    }
    if (t == ")") {
      if (depth == 0) throw ParseError(card.line, "unbalanced ')'");
      --depth;
      ++i;
      if (i != tokens.size()) throw ParseError(card.line, "text after closing ')'");
      continue;
    }
    if (t == "=") throw ParseError(card.line, "'=' without a parameter name");
    if (i + 1 < tokens.size() && tokens[i + 1] == "=") {
      if (i + 2 >= tokens.size() || is_punct(tokens[i + 2])) {
        throw ParseError(card.line, "parameter '" + t + "' has no value");
      }
      const std::string& raw = tokens[i + 2];
      if (auto v = parse_si_number(raw)) {
        params.set(t, *v);
      } else {
        params.set(t, raw);
      }
      i += 3;
    } else {
      params.set(t, "1");
      ++i;
    }
  }
  if (depth != 0) throw ParseError(card.line, "missing ')'");
  return Model(tokens[1], tokens[2], std::move(params));
}

}  // namespace

std::vector<Model> parse_spice_models(std::string_view text) {
  std::vector<Model> models;
  for (const Card& card : logical_lines(text)) {
    const auto space = card.text.find_first_of(" \t(");
    if (lower(card.text.substr(0, space)) != ".model") continue;
    models.push_back(parse_model_card(card));
  }
  return models;
}

// ---------------------------------------------------------------------------
// Verilog-A signatures

namespace {

struct Token {
  enum Kind { Ident, Number, String, Punct } kind;
  std::string text;
  std::size_t line;
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '\\'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$'; }

std::vector<Token> lex_veriloga(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line = 1;
  std::size_t i = 0;
  bool line_start = true;
  while (i < text.size()) {
    const char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
      line_start = true;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '/') {
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    if (c == '/' && i + 1 < text.size() && text[i + 1] == '*') {
      const std::size_t start_line = line;
      i += 2;
      while (i + 1 < text.size() && !(text[i] == '*' && text[i + 1] == '/')) {
        if (text[i] == '\n') ++line;
        ++i;
      }
      if (i + 1 >= text.size()) throw ParseError(start_line, "unterminated block comment");
      i += 2;
      continue;
    }
    if (c == '`' && line_start) {
      // Compiler directive: skip the rest of the line.
      while (i < text.size() && text[i] != '\n') ++i;
      continue;
    }
    line_start = false;
    if (c == '"') {
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"' && text[j] != '\n') {
        if (text[j] == '\\') ++j;
        ++j;
      }
      if (j >= text.size() || text[j] != '"') throw ParseError(line, "unterminated string literal");
      tokens.push_back({Token::String, std::string(text.substr(i + 1, j - i - 1)), line});
      i = j + 1;
      continue;
    }
    if (ident_start(c)) {
      std::size_t j = i + 1;
      while (j < text.size() && ident_char(text[j])) ++j;
      tokens.push_back({Token::Ident, std::string(text.substr(i, j - i)), line});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      std::size_t j = i;
      while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '.' ||
                                 ((text[j] == '+' || text[j] == '-') && (text[j - 1] == 'e' || text[j - 1] == 'E')))) {
        ++j;
      }
      tokens.push_back({Token::Number, std::string(text.substr(i, j - i)), line});
      i = j;
      continue;
    }
    tokens.push_back({Token::Punct, std::string(1, c), line});
    ++i;
  }
  return tokens;
}

// Verilog-A scale factors are case-sensitive: M is mega, m is milli.
std::optional<double> veriloga_number(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value, std::chars_format::general);
  if (ec != std::errc() || ptr == first) return std::nullopt;
  if (ptr == last) return value;
  if (ptr + 1 != last) return std::nullopt;
  static const std::pair<char, int> kScale[] = {{'T', 12}, {'G', 9},  {'M', 6},  {'K', 3},   {'k', 3}, {'m', -3},
                                                {'u', -6}, {'n', -9}, {'p', -12}, {'f', -15}, {'a', -18}};
  for (const auto& [ch, exp] : kScale) {
    if (*ptr == ch) {
      const std::string scaled = std::string(first, ptr) + "e" + std::to_string(exp);
      std::from_chars(scaled.data(), scaled.data() + scaled.size(), value);
      return std::isfinite(value) ? std::optional<double>(value) : std::nullopt;
    }
  }
  return std::nullopt;
}

ParamValue parameter_value(const std::vector<Token>& expr, std::size_t line) {
  if (expr.empty()) throw ParseError(line, "parameter has no default value");
  if (expr.size() == 1 && expr[0].kind == Token::String) return ParamValue(expr[0].text);
  const bool negative = expr.size() == 2 && expr[0].text == "-";
  if ((expr.size() == 1 || negative) && expr.back().kind == Token::Number) {
    if (auto v = veriloga_number(expr.back().text)) return ParamValue(negative ? -*v : *v);
  }
  std::string joined;
  for (const auto& t : expr) joined += t.text;
  try {
    return ParamValue(Formula::parse(joined));
  } catch (const Error&) {
    return ParamValue(joined);
  }
}

class VerilogAScanner {
 public:
  explicit VerilogAScanner(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  Component scan() {
    std::vector<std::size_t> starts;
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (tokens_[i].kind == Token::Ident && (tokens_[i].text == "module" || tokens_[i].text == "macromodule")) {
        starts.push_back(i);
      }
    }
    if (starts.empty()) throw Error(Errc::NoModule, "no module declaration found");
    if (starts.size() > 1) {
      throw Error(Errc::MultipleModules, "found " + std::to_string(starts.size()) + " modules; expected exactly one");
    }
    pos_ = starts[0] + 1;
    const Token& name = expect_ident("module name");

    Params params;
    if (peek("#")) {
      ++pos_;
      expect("(");
      scan_parameters_until_close(params);
    }

    std::vector<NetRef> ports;
    std::vector<std::string> port_names;
    if (peek("(")) {
      ++pos_;
      port_names = scan_port_list();
    }
    expect(";");
    if (port_names.empty()) throw Error(Errc::NoPorts, "module '" + name.text + "' declares no ports");
    for (const auto& p : port_names) {
      (void)p;
      ports.emplace_back();
    }

    bool ended = false;
    while (pos_ < tokens_.size()) {
      const Token& t = tokens_[pos_];
      if (t.kind == Token::Ident && t.text == "endmodule") {
        ended = true;
        break;
      }
      if (t.kind == Token::Ident && t.text == "parameter") {
        ++pos_;
        scan_declaration(params, ";");
        continue;
      }
      ++pos_;
    }
    if (!ended) throw ParseError(name.line, "module '" + name.text + "' has no endmodule");

    Metadata meta;
    meta.set("source", "verilog-a");
    std::string ports_joined;
    for (std::size_t i = 0; i < port_names.size(); ++i) ports_joined += (i ? "," : "") + port_names[i];
    meta.set("ports", ports_joined);
    return Component(name.text, std::move(ports), std::move(params), "N", std::move(meta));
  }

 private:
  bool peek(const char* text) const { return pos_ < tokens_.size() && tokens_[pos_].text == text; }

  std::size_t line() const { return pos_ < tokens_.size() ? tokens_[pos_].line : (tokens_.empty() ? 1 : tokens_.back().line); }

  void expect(const char* text) {
    if (!peek(text)) throw ParseError(line(), std::string("expected '") + text + "'");
    ++pos_;
  }

  const Token& expect_ident(const char* what) {
    if (pos_ >= tokens_.size() || tokens_[pos_].kind != Token::Ident) {
      throw ParseError(line(), std::string("expected ") + what);
    }
    return tokens_[pos_++];
  }

  std::vector<std::string> scan_port_list() {
    std::vector<std::string> names;
    std::string last_ident;
    int bracket = 0;
    for (;;) {
      if (pos_ >= tokens_.size()) throw ParseError(line(), "unterminated port list");
      const Token& t = tokens_[pos_++];
      if (t.text == "[") ++bracket;
      if (t.text == "]") --bracket;
      if (bracket > 0) continue;
      if (t.text == "," || t.text == ")") {
        if (!last_ident.empty()) names.push_back(last_ident);
        else if (t.text == ",") throw ParseError(t.line, "empty port in port list");
        last_ident.clear();
        if (t.text == ")") return names;
        continue;
      }
      if (t.kind == Token::Ident) last_ident = t.text;
    }
  }

  void scan_parameters_until_close(Params& params) {
    while (!peek(")")) {
      if (pos_ >= tokens_.size()) throw ParseError(line(), "unterminated parameter list");
      if (peek("parameter")) {
        ++pos_;
        scan_declaration(params, ")");
      } else {
        ++pos_;
      }
    }
    ++pos_;
  }

  // parameter [real|integer|string] NAME = expr [from ...] {, NAME = expr} terminator
  void scan_declaration(Params& params, const char* terminator) {
    if (pos_ < tokens_.size() &&
        (tokens_[pos_].text == "real" || tokens_[pos_].text == "integer" || tokens_[pos_].text == "string")) {
      ++pos_;
    }
    for (;;) {
      const Token& name = expect_ident("parameter name");
      expect("=");
      std::vector<Token> expr;
      int depth = 0;
      bool in_range = false;
      for (;;) {
        if (pos_ >= tokens_.size()) throw ParseError(name.line, "unterminated parameter '" + name.text + "'");
        const Token& t = tokens_[pos_];
        if (depth == 0 && (t.text == ";" || t.text == "," || (t.text == ")" && std::string(terminator) == ")"))) break;
        if (t.text == "(" || t.text == "[") ++depth;
        if (t.text == ")" || t.text == "]") --depth;
        if (depth == 0 && t.kind == Token::Ident && (t.text == "from" || t.text == "exclude")) in_range = true;
        if (!in_range) expr.push_back(t);
        ++pos_;
      }
      params.set(name.text, parameter_value(expr, name.line));
      if (peek(",") && pos_ + 2 < tokens_.size() && tokens_[pos_ + 1].kind == Token::Ident &&
          tokens_[pos_ + 2].text == "=") {
        ++pos_;
        continue;
      }
      if (peek(";")) ++pos_;
      return;
    }
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

}  // namespace

Component parse_veriloga(std::string_view text) { return VerilogAScanner(lex_veriloga(text)).scan(); }

}  // namespace netforge
