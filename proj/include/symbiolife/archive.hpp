#pragma once

#include <cstdint>
#include <map>
#include <string_view>
#include <vector>

#include "symbiolife/genome.hpp"

namespace symbiolife {

using IndividualId = std::uint64_t;

enum class Origin { Random, Flip, Grow, Shrink, Crossover, Fusion, Fission };

const char* to_string(Origin origin);
Origin origin_from_string(std::string_view text);

struct EliteRecord {
  int generation = 0;
  int rank = 0;
  IndividualId id = 0;
  SeedGenome genome;
  double relative_fitness = 0.0;
  Origin origin = Origin::Random;
  int birth_generation = 0;
};

/// Per-generation elite snapshots, each sorted by descending relative fitness.
class EliteArchive {
 public:
  void add(EliteRecord record);

  bool has_generation(int generation) const { return generations_.count(generation) != 0; }
  const std::vector<EliteRecord>& generation(int generation) const;
  /// Generations present, ascending.
  std::vector<int> generations() const;
  int last_generation() const;
  bool empty() const { return generations_.empty(); }
  std::size_t size() const;

 private:
  std::map<int, std::vector<EliteRecord>> generations_;
};

}  // namespace symbiolife
