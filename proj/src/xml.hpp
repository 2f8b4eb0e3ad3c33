#pragma once

// Minimal XML reader for the model document: elements, attributes, text,
// comments, the XML declaration and the five predefined entities.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace prmgen::xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;
  std::size_t line = 0;

  const std::string* attribute(std::string_view key) const;
};

/// Throws ModelParseError(kMalformedXml) with the offending line.
Element parse(std::string_view text);

std::string escape(std::string_view raw);

}  // namespace prmgen::xml
