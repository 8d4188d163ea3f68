#pragma once

// Minimal XML well-formedness check (tag nesting, attribute quoting),
// sufficient to vet emitted SVG documents.

#include <cctype>
#include <string>
#include <vector>

namespace oracle {

inline bool xml_well_formed(const std::string& text) {
  std::vector<std::string> stack;
  size_t i = 0;
  const size_t n = text.size();
  auto read_name = [&](size_t& p) {
    std::string name;
    while (p < n && (std::isalnum(static_cast<unsigned char>(text[p])) || text[p] == ':' ||
                     text[p] == '-' || text[p] == '_'))
      name += text[p++];
    return name;
  };

  while (i < n) {
    if (text[i] != '<') {
      ++i;
      continue;
    }
    if (text.compare(i, 4, "<!--") == 0) {
      const size_t close = text.find("-->", i);
      if (close == std::string::npos) return false;
      i = close + 3;
      continue;
    }
    if (text.compare(i, 2, "<?") == 0) {
      const size_t close = text.find("?>", i);
      if (close == std::string::npos) return false;
      i = close + 2;
      continue;
    }
    if (text.compare(i, 2, "</") == 0) {
      size_t p = i + 2;
      const std::string name = read_name(p);
      while (p < n && std::isspace(static_cast<unsigned char>(text[p]))) ++p;
      if (p >= n || text[p] != '>') return false;
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      i = p + 1;
      continue;
    }
    // opening or self-closing tag
    size_t p = i + 1;
    const std::string name = read_name(p);
    if (name.empty()) return false;
    bool self_closing = false;
    while (p < n && text[p] != '>') {
      if (text[p] == '"') {
        const size_t close = text.find('"', p + 1);
        if (close == std::string::npos) return false;
        p = close + 1;
        continue;
      }
      if (text[p] == '/' && p + 1 < n && text[p + 1] == '>') {
        self_closing = true;
        ++p;
        break;
      }
      if (text[p] == '<') return false;
      ++p;
    }
    if (p >= n) return false;
    if (!self_closing) stack.push_back(name);
    i = p + 1;
  }
  return stack.empty();
}

}  // namespace oracle
