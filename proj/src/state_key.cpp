#include "dagbandit/state_key.hpp"

#include <sstream>

#include "dagbandit/errors.hpp"

namespace dagbandit {

std::string to_string(const StateKey& key) {
  std::string out = "{";
  for (std::size_t i = 0; i < key.items.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(key.items[i]);
  }
  if (key.stop) out += key.items.empty() ? "stop" : ",stop";
  out += '}';
  return out;
}

StateKey parse_state_key(const std::string& text) {
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw InputError("malformed state key: " + text);
  }
  StateKey key;
  std::stringstream body(text.substr(1, text.size() - 2));
  std::string token;
  while (std::getline(body, token, ',')) {
    if (token == "stop") {
      key.stop = true;
    } else if (!token.empty()) {
      std::size_t used = 0;
      const unsigned long value = std::stoul(token, &used);
      if (used != token.size() || value > 0xFFFF) throw InputError("malformed state key: " + text);
      key.items.push_back(static_cast<Feature>(value));
    }
  }
  return key;
}

}  // namespace dagbandit
