#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "sqleq/error.hpp"
#include "sqleq/sql/ast.hpp"

namespace sqleq::sql {

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::string expected, const std::string& message)
      : Error(message), offset_(offset), expected_(std::move(expected)) {}

  /// Byte offset of the offending token in the input.
  std::size_t offset() const noexcept { return offset_; }
  /// What the parser wanted to see there.
  const std::string& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::string expected_;
};

/// A construct outside the supported dialect; raised in strict mode only.
class UnsupportedConstruct : public Error {
 public:
  UnsupportedConstruct(std::size_t offset, const std::string& message)
      : Error(message), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

enum class ParseMode { Lenient, Strict };

/// Parses one SELECT-based statement (optionally WITH-prefixed and
/// semicolon-terminated).
///
/// In lenient mode an unrecognized trailing clause is kept verbatim in
/// SqlAst::opaque_tail and the AST is flagged partial; strict mode raises
/// UnsupportedConstruct instead.
SqlAst parse_sql(std::string_view text, ParseMode mode = ParseMode::Strict);

}  // namespace sqleq::sql
