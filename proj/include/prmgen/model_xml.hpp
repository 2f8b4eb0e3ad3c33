#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "prmgen/dependency.hpp"

namespace prmgen {

enum class ModelIssue {
  kMalformedXml,
  kUnknownTag,
  kMissingAttribute,
  kInvalidValue,
  kDanglingReference,
  kNonNormalizedRow,
  kInconsistent,
};

std::string_view model_issue_name(ModelIssue issue);

/// Diagnostic raised by parse_prm; `line` is 1-based.
class ModelParseError : public std::runtime_error {
 public:
  ModelParseError(ModelIssue issue, std::size_t line, const std::string& message);

  ModelIssue issue() const { return issue_; }
  std::size_t line() const { return line_; }

 private:
  ModelIssue issue_;
  std::size_t line_;
};

/// Model document, format version 1:
///
///   <prm version="1" kmax="3">
///     <schema>
///       <class name="clazz2" pk="clazz2id">
///         <attribute name="att0" states="v0,v1"/>
///         <referenceSlot name="clazz1fkatt12" target="clazz1"/>
///       </class>
///     </schema>
///     <dependencies>
///       <dependency child="clazz2.att3" parent="clazz3.att0"
///                   chain="~clazz2fkatt23" aggregator="MODE"/>
///     </dependencies>
///     <cpds>
///       <cpd child="clazz2.att3" parents="clazz3.att0:~clazz2fkatt23">
///         <row>0.25 0.75</row>
///       </cpd>
///     </cpds>
///   </prm>
///
/// Chains are slash-joined slot names with '~' marking inverse steps; slot
/// indices follow document order. Probabilities use the shortest decimal
/// that reads back to the same double.
std::string serialize_prm(const Prm& prm);

/// Inverse of serialize_prm. The result passes validate_prm; anything else
/// raises ModelParseError.
Prm parse_prm(std::string_view text);

}  // namespace prmgen
