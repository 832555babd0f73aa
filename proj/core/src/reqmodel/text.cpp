#include "sacre/reqmodel/text.hpp"

#include <cctype>
#include <charconv>
#include <cstdlib>

namespace sacre::reqmodel {

void AliasMap::add(const std::string& canonical, const std::string& display) {
  display_to_canonical_[display] = canonical;
  canonical_to_display_[canonical] = display;
}

const std::string& AliasMap::to_canonical(const std::string& ident) const {
  auto it = display_to_canonical_.find(ident);
  return it == display_to_canonical_.end() ? ident : it->second;
}

const std::string& AliasMap::to_display(const std::string& canonical) const {
  auto it = canonical_to_display_.find(canonical);
  return it == canonical_to_display_.end() ? canonical : it->second;
}

std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

const char* op_text(CmpOp op) {
  switch (op) {
    case CmpOp::Ge: return ">=";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Lt: return "<";
    case CmpOp::Eq: return "=";
  }
  return "?";
}

class Parser {
 public:
  Parser(const std::string& text, const AliasMap& aliases)
      : s_(text), aliases_(aliases) {}

  Operationalization parse() {
    std::vector<Conjunction> clauses;
    if (s_.empty()) return Operationalization{};
    clauses.push_back(parse_clause());
    while (try_consume(" OR ")) clauses.push_back(parse_clause());
    if (pos_ != s_.size()) fail("trailing input");
    return Operationalization(std::move(clauses));
  }

 private:
  Conjunction parse_clause() {
    Conjunction conds;
    conds.push_back(parse_cond());
    while (try_consume(" AND ")) conds.push_back(parse_cond());
    return conds;
  }

  AtomicCondition parse_cond() {
    AtomicCondition c;
    c.variable = aliases_.to_canonical(parse_ident());
    if (try_consume(">=")) c.op = CmpOp::Ge;
    else if (try_consume("<=")) c.op = CmpOp::Le;
    else if (try_consume(">")) c.op = CmpOp::Gt;
    else if (try_consume("<")) c.op = CmpOp::Lt;
    else if (try_consume("=")) c.op = CmpOp::Eq;
    else fail("expected comparison operator");
    c.threshold = parse_number();
    return c;
  }

  std::string parse_ident() {
    std::size_t start = pos_;
    if (pos_ >= s_.size() || !std::isalpha(static_cast<unsigned char>(s_[pos_])))
      fail("expected identifier");
    ++pos_;
    while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    return s_.substr(start, pos_ - start);
  }

  double parse_number() {
    double value = 0.0;
    auto res = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), value);
    if (res.ec != std::errc{} || res.ptr == s_.data() + pos_) fail("expected number");
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return value;
  }

  bool try_consume(const char* lit) {
    std::size_t n = std::char_traits<char>::length(lit);
    if (s_.compare(pos_, n, lit) == 0) {
      pos_ += n;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw OperationalizationParseError("operationalization parse error at offset " +
                                       std::to_string(pos_) + ": " + what);
  }

  const std::string& s_;
  const AliasMap& aliases_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string format_operationalization(const Operationalization& op,
                                      const AliasMap& aliases) {
  std::string out;
  bool first_clause = true;
  for (const auto& clause : op.clauses()) {
    if (!first_clause) out += " OR ";
    first_clause = false;
    bool first_cond = true;
    for (const auto& cond : clause) {
      if (!first_cond) out += " AND ";
      first_cond = false;
      out += aliases.to_display(cond.variable);
      out += op_text(cond.op);
      out += format_number(cond.threshold);
    }
  }
  return out;
}

Operationalization parse_operationalization(const std::string& text,
                                            const AliasMap& aliases) {
  return Parser(text, aliases).parse();
}

}  // namespace sacre::reqmodel
