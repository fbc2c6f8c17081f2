#include "xml_reader.hpp"

#include <charconv>

#include "routepred/errors.hpp"

namespace routepred::io::detail {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }

bool is_name_start(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_' ||
         c == ':' || u >= 0x80;
}

bool is_name_char(char c) {
  return is_name_start(c) || (c >= '0' && c <= '9') || c == '-' || c == '.';
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

}  // namespace

void XmlReader::fail(const std::string& what, std::size_t at) const {
  throw ParseError("XML error at byte " + std::to_string(at) + ": " + what, at);
}

void XmlReader::skip_whitespace() {
  while (pos_ < doc_.size() && is_space(doc_[pos_])) ++pos_;
}

void XmlReader::skip_until(std::string_view terminator, const char* what) {
  const std::size_t start = pos_;
  const std::size_t end = doc_.find(terminator, pos_);
  if (end == std::string_view::npos) fail(std::string("unterminated ") + what, start);
  pos_ = end + terminator.size();
}

void XmlReader::skip_doctype() {
  // <!DOCTYPE ... [ internal subset ] >
  const std::size_t start = pos_;
  int bracket = 0;
  char quote = 0;
  for (pos_ += 9; pos_ < doc_.size(); ++pos_) {
    const char c = doc_[pos_];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '[') {
      ++bracket;
    } else if (c == ']') {
      --bracket;
    } else if (c == '>' && bracket == 0) {
      ++pos_;
      return;
    }
  }
  fail("unterminated DOCTYPE", start);
}

void XmlReader::check_text(std::size_t begin, std::size_t end) {
  const std::string_view text = doc_.substr(begin, end - begin);
  if (open_.empty()) {
    for (std::size_t k = 0; k < text.size(); ++k) {
      if (!is_space(text[k])) fail("content outside the root element", begin + k);
    }
    return;
  }
  decode(text, begin);
}

std::string XmlReader::read_name() {
  const std::size_t start = pos_;
  if (pos_ >= doc_.size() || !is_name_start(doc_[pos_])) fail("expected a name", pos_);
  while (pos_ < doc_.size() && is_name_char(doc_[pos_])) ++pos_;
  return std::string(doc_.substr(start, pos_ - start));
}

std::string XmlReader::decode(std::string_view raw, std::size_t at) const {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const char c = raw[k];
    if (c == '<') fail("'<' not allowed here", at + k);
    if (c != '&') {
      out += c;
      continue;
    }
    const std::size_t semi = raw.find(';', k);
    if (semi == std::string_view::npos) fail("unterminated entity reference", at + k);
    const std::string_view ent = raw.substr(k + 1, semi - k - 1);
    if (ent == "lt") {
      out += '<';
    } else if (ent == "gt") {
      out += '>';
    } else if (ent == "amp") {
      out += '&';
    } else if (ent == "quot") {
      out += '"';
    } else if (ent == "apos") {
      out += '\'';
    } else if (ent.size() > 1 && ent[0] == '#') {
      const bool hex = ent[1] == 'x';
      const std::string_view digits = ent.substr(hex ? 2 : 1);
      unsigned long cp = 0;
      auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(),
                                     cp, hex ? 16 : 10);
      if (digits.empty() || ec != std::errc{} ||
          p != digits.data() + digits.size() || cp == 0 || cp > 0x10FFFF) {
        fail("bad character reference", at + k);
      }
      append_utf8(out, cp);
    } else {
      fail("unknown entity '&" + std::string(ent) + ";'", at + k);
    }
    k = semi;
  }
  return out;
}

XmlEvent XmlReader::read_start_tag() {
  XmlEvent ev;
  ev.kind = XmlEvent::Kind::kStart;
  ev.offset = pos_;
  if (open_.empty() && root_seen_) fail("second root element", pos_);
  ++pos_;
  ev.name = read_name();
  while (true) {
    const std::size_t before = pos_;
    skip_whitespace();
    if (pos_ >= doc_.size()) fail("unterminated start tag", ev.offset);
    if (doc_[pos_] == '>') {
      ++pos_;
      open_.push_back(ev.name);
      break;
    }
    if (starts_with("/>")) {
      pos_ += 2;
      pending_end_ = true;
      pending_ = XmlEvent{XmlEvent::Kind::kEnd, ev.name, {}, ev.offset};
      break;
    }
    if (pos_ == before) fail("expected whitespace before attribute", pos_);
    const std::size_t attr_at = pos_;
    std::string name = read_name();
    skip_whitespace();
    if (pos_ >= doc_.size() || doc_[pos_] != '=') fail("expected '='", pos_);
    ++pos_;
    skip_whitespace();
    if (pos_ >= doc_.size() || (doc_[pos_] != '"' && doc_[pos_] != '\'')) {
      fail("expected quoted attribute value", pos_);
    }
    const char quote = doc_[pos_++];
    const std::size_t value_start = pos_;
    const std::size_t value_end = doc_.find(quote, pos_);
    if (value_end == std::string_view::npos) {
      fail("unterminated attribute value", value_start - 1);
    }
    pos_ = value_end + 1;
    if (ev.attribute(name)) fail("duplicate attribute '" + name + "'", attr_at);
    ev.attributes.push_back(
        {std::move(name),
         decode(doc_.substr(value_start, value_end - value_start), value_start)});
  }
  root_seen_ = true;
  return ev;
}

XmlEvent XmlReader::read_end_tag() {
  XmlEvent ev;
  ev.kind = XmlEvent::Kind::kEnd;
  ev.offset = pos_;
  pos_ += 2;
  ev.name = read_name();
  skip_whitespace();
  if (pos_ >= doc_.size() || doc_[pos_] != '>') fail("malformed end tag", ev.offset);
  ++pos_;
  if (open_.empty() || open_.back() != ev.name) {
    fail("end tag '" + ev.name + "' does not match an open element", ev.offset);
  }
  open_.pop_back();
  return ev;
}

XmlEvent XmlReader::next() {
  if (pending_end_) {
    pending_end_ = false;
    return std::move(pending_);
  }
  while (true) {
    const std::size_t text_start = pos_;
    const std::size_t lt = doc_.find('<', pos_);
    const std::size_t text_end = lt == std::string_view::npos ? doc_.size() : lt;
    check_text(text_start, text_end);
    pos_ = text_end;
    if (pos_ >= doc_.size()) {
      if (!open_.empty()) fail("unclosed element '" + open_.back() + "'", pos_);
      if (!root_seen_) fail("document has no root element", pos_);
      return XmlEvent{XmlEvent::Kind::kEndOfDocument, {}, {}, pos_};
    }
    if (starts_with("<?")) {
      skip_until("?>", "processing instruction");
    } else if (starts_with("<!--")) {
      skip_until("-->", "comment");
    } else if (starts_with("<![CDATA[")) {
      if (open_.empty()) fail("CDATA outside the root element", pos_);
      skip_until("]]>", "CDATA section");
    } else if (starts_with("<!DOCTYPE")) {
      if (root_seen_) fail("DOCTYPE after the root element", pos_);
      skip_doctype();
    } else if (starts_with("</")) {
      return read_end_tag();
    } else {
      return read_start_tag();
    }
  }
}

}  // namespace routepred::io::detail
