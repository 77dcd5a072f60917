#include "nnea/bitgenome.hpp"

#include "nnea/errors.hpp"

namespace nnea {

Genome Genome::from_string(const std::string& bits) {
  if (bits.empty()) throw ConfigError("genome string must be non-empty");
  Genome g(static_cast<int>(bits.size()));
  for (size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1')
      g.set(static_cast<int>(i), true);
    else if (bits[i] != '0')
      throw ConfigError("genome string may contain only 0 and 1");
  }
  return g;
}

std::string Genome::to_string() const {
  std::string s(static_cast<size_t>(n_), '0');
  for (int i = 0; i < n_; ++i)
    if (bit(i)) s[static_cast<size_t>(i)] = '1';
  return s;
}

}  // namespace nnea
