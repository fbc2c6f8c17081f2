#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace routepred::io::detail {

struct XmlAttribute {
  std::string name;
  std::string value;  // entity references already decoded
};

struct XmlEvent {
  enum class Kind { kStart, kEnd, kEndOfDocument };
  Kind kind = Kind::kEndOfDocument;
  std::string name;
  std::vector<XmlAttribute> attributes;
  std::size_t offset = 0;  // byte offset of the '<' that opened the tag

  const std::string* attribute(std::string_view attr) const {
    for (const auto& a : attributes) {
      if (a.name == attr) return &a.value;
    }
    return nullptr;
  }
};

// Pull parser over an in-memory document. Reports element starts and ends
// only; text, comments, processing instructions, CDATA and the DOCTYPE are
// checked for well-formedness and skipped. A self-closing tag yields a start
// event immediately followed by an end event.
//
// Throws ParseError with the byte offset of the first problem: malformed
// markup, mismatched or unclosed tags, duplicate attributes, unknown entity
// references, or content outside the single root element.
class XmlReader {
 public:
  explicit XmlReader(std::string_view document) : doc_(document) {}

  XmlEvent next();

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) const;
  bool starts_with(std::string_view s) const {
    return doc_.substr(pos_, s.size()) == s;
  }
  void skip_whitespace();
  void skip_until(std::string_view terminator, const char* what);
  void skip_doctype();
  void check_text(std::size_t begin, std::size_t end);
  std::string read_name();
  std::string decode(std::string_view raw, std::size_t at) const;
  XmlEvent read_start_tag();
  XmlEvent read_end_tag();

  std::string_view doc_;
  std::size_t pos_ = 0;
  std::vector<std::string> open_;
  bool root_seen_ = false;
  bool pending_end_ = false;
  XmlEvent pending_;
};

}  // namespace routepred::io::detail
