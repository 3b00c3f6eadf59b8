#include "rifp/parse.hpp"

#include <string>

namespace rifp {

namespace {

constexpr long long kMaxLabel = 1'000'000'000;

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  void skip_ws() {
    while (!eof() && (peek() == ' ' || peek() == '\t' || peek() == '\r' || peek() == '\n'))
      ++pos;
  }

  void expect(char c, const char* what) {
    if (eof() || peek() != c)
      throw ParseError(std::string("expected ") + what, pos);
    ++pos;
  }

  int nat(const char* what) {
    if (eof() || peek() < '0' || peek() > '9')
      throw ParseError(std::string("expected ") + what, pos);
    std::size_t start = pos;
    long long v = 0;
    while (!eof() && peek() >= '0' && peek() <= '9') {
      v = v * 10 + (peek() - '0');
      if (v > kMaxLabel)
        throw ParseError(std::string(what) + " out of range", start);
      ++pos;
    }
    if (v < 1) throw ParseError(std::string(what) + " must be positive", start);
    return static_cast<int>(v);
  }

  std::string atom() {
    if (eof() || peek() < 'a' || peek() > 'z')
      throw ParseError("expected an atom", pos);
    std::size_t start = pos;
    ++pos;
    while (!eof()) {
      char c = peek();
      if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_')
        ++pos;
      else
        break;
    }
    return std::string(text.substr(start, pos - start));
  }

  Cirquent cirquent() {
    skip_ws();
    if (eof()) throw ParseError("unexpected end of input", pos);
    char c = peek();
    if (c == '(') {
      ++pos;
      Cirquent left = cirquent();
      skip_ws();
      if (eof() || (peek() != '&' && peek() != '|'))
        throw ParseError("expected '&[' or '|['", pos);
      Op op = peek() == '&' ? Op::conj : Op::disj;
      ++pos;
      // The bracket is part of the operator token: "& [" is not accepted.
      if (eof() || peek() != '[')
        throw ParseError("expected '[' directly after the operator", pos);
      ++pos;
      skip_ws();
      int cluster = nat("a cluster label");
      skip_ws();
      expect(':', "':' between cluster and rank");
      skip_ws();
      int rank = nat("a rank label");
      skip_ws();
      expect(']', "']' closing the operator");
      Cirquent right = cirquent();
      skip_ws();
      expect(')', "')'");
      return Cirquent::node(op, Index{cluster, rank}, std::move(left), std::move(right));
    }
    if (c == '~') {
      ++pos;
      skip_ws();
      return Cirquent::leaf(atom(), true);
    }
    return Cirquent::leaf(atom(), false);
  }
};

void render_into(const Cirquent& c, std::string& out) {
  if (c.is_leaf()) {
    if (c.negated()) out += '~';
    out += c.atom();
    return;
  }
  out += '(';
  render_into(c.left(), out);
  out += ' ';
  out += op_symbol(c.op());
  out += '[';
  out += std::to_string(c.index().cluster);
  out += ':';
  out += std::to_string(c.index().rank);
  out += "] ";
  render_into(c.right(), out);
  out += ')';
}

}  // namespace

Cirquent parse_cirquent(std::string_view text) {
  Parser p{text};
  Cirquent c = p.cirquent();
  p.skip_ws();
  if (!p.eof()) throw ParseError("trailing input after cirquent", p.pos);
  return c;
}

std::string render(const Cirquent& c) {
  std::string out;
  render_into(c, out);
  return out;
}

}  // namespace rifp
