#include "xml.hpp"

#include <cctype>

#include "prmgen/model_xml.hpp"

namespace prmgen::xml {

const std::string* Element::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes) {
    if (k == key) return &v;
  }
  return nullptr;
}

std::string escape(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  for (char c : raw) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  Element document() {
    skip_misc();
    if (at_end() || peek() != '<') fail("expected a root element");
    Element root = element();
    skip_misc();
    if (!at_end()) fail("content after the root element");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ModelParseError(ModelIssue::kMalformedXml, line_, "malformed XML: " + what);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool starts_with(std::string_view s) const { return text_.substr(pos_).starts_with(s); }

  void advance(std::size_t n = 1) {
    for (std::size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_++] == '\n') ++line_;
    }
  }

  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) advance();
  }

  void skip_until(std::string_view terminator) {
    while (!at_end() && !starts_with(terminator)) advance();
    if (at_end()) fail("unterminated construct, expected " + std::string(terminator));
    advance(terminator.size());
  }

  // Whitespace, comments and processing instructions outside elements.
  void skip_misc() {
    for (;;) {
      skip_space();
      if (starts_with("<?")) {
        skip_until("?>");
      } else if (starts_with("<!--")) {
        skip_until("-->");
      } else {
        return;
      }
    }
  }

  std::string name() {
    const std::size_t start = pos_;
    while (!at_end()) {
      const char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == ':') {
        advance();
      } else {
        break;
      }
    }
    if (pos_ == start) fail("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string decode(std::string_view raw) {
    std::string out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out += raw[i];
        continue;
      }
      const std::size_t semi = raw.find(';', i);
      if (semi == std::string_view::npos) fail("unterminated entity");
      const std::string_view ent = raw.substr(i + 1, semi - i - 1);
      if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "amp") out += '&';
      else if (ent == "quot") out += '"';
      else if (ent == "apos") out += '\'';
      else fail("unknown entity &" + std::string(ent) + ";");
      i = semi;
    }
    return out;
  }

  Element element() {
    Element el;
    el.line = line_;
    advance();  // '<'
    el.name = name();
    for (;;) {
      skip_space();
      if (at_end()) fail("unterminated start tag <" + el.name + ">");
      if (starts_with("/>")) {
        advance(2);
        return el;
      }
      if (peek() == '>') {
        advance();
        break;
      }
      std::string key = name();
      skip_space();
      if (at_end() || peek() != '=') fail("expected '=' after attribute " + key);
      advance();
      skip_space();
      if (at_end() || (peek() != '"' && peek() != '\'')) fail("attribute value must be quoted");
      const char quote = peek();
      advance();
      const std::size_t start = pos_;
      while (!at_end() && peek() != quote) {
        if (peek() == '<') fail("'<' inside attribute value");
        advance();
      }
      if (at_end()) fail("unterminated attribute value");
      std::string value = decode(text_.substr(start, pos_ - start));
      advance();
      if (el.attribute(key)) fail("duplicate attribute " + key);
      el.attributes.emplace_back(std::move(key), std::move(value));
    }

    for (;;) {
      if (at_end()) fail("missing end tag </" + el.name + ">");
      if (starts_with("<!--")) {
        skip_until("-->");
      } else if (starts_with("</")) {
        advance(2);
        const std::string closing = name();
        if (closing != el.name) fail("end tag </" + closing + "> does not match <" + el.name + ">");
        skip_space();
        if (at_end() || peek() != '>') fail("malformed end tag");
        advance();
        return el;
      } else if (peek() == '<') {
        el.children.push_back(element());
      } else {
        const std::size_t start = pos_;
        while (!at_end() && peek() != '<') advance();
        el.text += decode(text_.substr(start, pos_ - start));
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

}  // namespace

Element parse(std::string_view text) { return Reader(text).document(); }

}  // namespace prmgen::xml
