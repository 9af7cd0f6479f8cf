#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "recall/formula.hpp"

namespace recall {

struct ParseDiagnostic {
  enum class Severity { Error, Warning };

  Severity severity = Severity::Error;
  int line = 1;
  int column = 1;
  std::string message;

  bool is_error() const { return severity == Severity::Error; }
  /// "line:col: error: message"
  std::string str() const;
};

struct ParseResult {
  std::optional<ContractSpec> spec;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return spec.has_value(); }
};

/// Parses an RCL contract file. Any error diagnostic means no spec. After
/// an error the parser skips to the next `;` and keeps going, so several
/// independent errors can be reported at once.
ParseResult parse(std::string_view text);

std::string render(const ContractSpec& spec);
std::string render_formula(const Formula& f);
std::string render_action(const Action& a);

}  // namespace recall
