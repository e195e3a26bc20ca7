#include "confgeo/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "confgeo/errors.hpp"

namespace confgeo {

namespace {

class ExprParser {
 public:
  ExprParser(std::string_view text, int m, int line, int column)
      : text_(text), m_(m), line_(line), column_(column) {}

  Expr parse() {
    skip_space();
    if (at_end()) fail("empty expression", pos_);
    Expr e = sum();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + text_[pos_] + "'", pos_);
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::size_t at) const {
    throw ParseError(message, line_, column_ + static_cast<int>(at));
  }

  bool at_end() const { return pos_ >= text_.size(); }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (!at_end() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expr sum() {
    Expr e = product();
    for (;;) {
      if (accept('+')) {
        e = e + product();
      } else if (accept('-')) {
        e = e - product();
      } else {
        return e;
      }
    }
  }

  Expr product() {
    Expr e = unary();
    for (;;) {
      if (accept('*')) {
        e = e * unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Expr d = unary();
        if (d.is_constant(0)) fail("division by zero", at);
        e = e / d;
      } else {
        return e;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t at = pos_;
    const Expr exponent = unary();
    if (exponent.kind() != Expr::Kind::Constant) fail("exponent must be an integer constant", at);
    const mpq_class& value = exponent.constant();
    if (value.get_den() != 1) fail("non-integer exponent " + value.get_str(), at);
    if (abs(value.get_num()) > Monomial::kMaxExponent) fail("exponent too large", at);
    const int n = static_cast<int>(value.get_num().get_si());
    if (base.is_constant(0) && n < 0) fail("negative power of zero", at);
    return Expr::power(base, n);
  }

  Expr primary() {
    skip_space();
    if (at_end()) fail("unexpected end of expression", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = sum();
      if (!accept(')')) fail("expected ')'", pos_);
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (!at_end() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E')) {
        fail("only integer and rational literals are allowed", pos_);
      }
      return Expr(mpq_class(mpz_class(std::string(text_.substr(start, pos_ - start)))));
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (!at_end() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return variable(text_.substr(start, pos_ - start), start);
    }
    fail(std::string("unexpected '") + c + "'", pos_);
  }

  Expr variable(std::string_view name, std::size_t at) {
    if (name == "x") return Expr::variable(VarId::x());
    const char kind = name[0];
    const std::string_view digits = name.substr(1);
    const bool numeric =
        !digits.empty() && digits.size() <= 3 &&
        std::all_of(digits.begin(), digits.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); });
    if ((kind != 'y' && kind != 'p' && kind != 'q') || !numeric) {
      fail("unknown variable '" + std::string(name) + "'", at);
    }
    const int index = std::stoi(std::string(digits));
    if (index < 1 || index > m_) {
      fail("index out of range in '" + std::string(name) + "' (dimension " + std::to_string(m_) + ")", at);
    }
    switch (kind) {
      case 'y': return Expr::variable(VarId::y(index));
      case 'p': return Expr::variable(VarId::p(index));
      default: return Expr::variable(VarId::q(index));
    }
  }

  std::string_view text_;
  int m_;
  int line_;
  int column_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Column (1-based) of a view into `line`.
int column_of(std::string_view line, std::string_view part) {
  return static_cast<int>(part.data() - line.data()) + 1;
}

}  // namespace

Expr parse_expression(std::string_view text, int m, int line, int column) {
  if (m < 1 || m > kMaxDimension) throw ParseError("dimension out of range", line, column);
  return ExprParser(text, m, line, column).parse();
}

SystemFile parse_system(std::string_view text) {
  std::optional<int> m;
  std::optional<std::string> name, expect;
  std::vector<std::optional<std::string>> rhs;
  std::vector<std::optional<Expr>> exprs;

  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;

    std::string_view body = line;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      const std::string_view comment = trim(line.substr(hash + 1));
      for (auto [key, slot] : {std::pair{std::string_view("name:"), &name}, std::pair{std::string_view("expect:"), &expect}}) {
        if (comment.substr(0, key.size()) == key) *slot = std::string(trim(comment.substr(key.size())));
      }
      body = line.substr(0, hash);
    }
    body = trim(body);
    if (body.empty()) {
      if (end == text.size()) break;
      continue;
    }

    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected '<name> = <value>'", line_no, column_of(line, body));
    const std::string_view lhs = trim(body.substr(0, eq));
    const std::string_view value = trim(body.substr(eq + 1));
    const int value_col = value.empty() ? column_of(line, body) + static_cast<int>(eq) + 1 : column_of(line, value);

    if (!m) {
      if (lhs != "m") throw ParseError("the first definition must be 'm = <int>'", line_no, column_of(line, lhs));
      int parsed = 0;
      std::size_t used = 0;
      try {
        parsed = std::stoi(std::string(value), &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != value.size()) throw ParseError("m must be an integer", line_no, value_col);
      if (parsed < 2 || parsed > kMaxDimension) {
        throw ParseError("m must lie in 2.." + std::to_string(kMaxDimension), line_no, value_col);
      }
      m = parsed;
      rhs.assign(parsed, std::nullopt);
      exprs.assign(parsed, std::nullopt);
      if (end == text.size()) break;
      continue;
    }

    if (lhs.size() < 2 || lhs[0] != 'f' ||
        !std::all_of(lhs.begin() + 1, lhs.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); }) ||
        lhs.size() > 4) {
      throw ParseError("expected 'f<i> = <expr>'", line_no, column_of(line, lhs));
    }
    const int i = std::stoi(std::string(lhs.substr(1)));
    if (i < 1 || i > *m) throw ParseError("equation index out of range", line_no, column_of(line, lhs));
    if (rhs[i - 1]) throw ParseError("f" + std::to_string(i) + " defined twice", line_no, column_of(line, lhs));
    exprs[i - 1] = parse_expression(value, *m, line_no, value_col);
    rhs[i - 1] = std::string(value);
    if (end == text.size()) break;
  }

  if (!m) throw ParseError("missing 'm = <int>'", line_no, 1);
  std::vector<std::string> texts;
  std::vector<Expr> f;
  for (int i = 0; i < *m; ++i) {
    if (!rhs[i]) throw ParseError("missing definition of f" + std::to_string(i + 1), line_no, 1);
    texts.push_back(*rhs[i]);
    f.push_back(*exprs[i]);
  }
  return SystemFile{*m, std::move(texts), std::move(name), std::move(expect), OdeSystem(*m, std::move(f))};
}

SystemFile read_system_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_system(buffer.str());
}

}  // namespace confgeo
