#include "symbiolife/archive.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "symbiolife/errors.hpp"

namespace symbiolife {

namespace {

constexpr std::array<const char*, 7> kOriginNames = {"random", "flip", "grow", "shrink",
                                                      "crossover", "fusion", "fission"};

}  // namespace

const char* to_string(Origin origin) { return kOriginNames[static_cast<std::size_t>(origin)]; }

Origin origin_from_string(std::string_view text) {
  for (std::size_t i = 0; i < kOriginNames.size(); ++i) {
    if (text == kOriginNames[i]) return static_cast<Origin>(i);
  }
  throw MalformedCsv("unknown origin '" + std::string(text) + "'");
}

void EliteArchive::add(EliteRecord record) {
  auto& records = generations_[record.generation];
  const auto pos = std::upper_bound(records.begin(), records.end(), record, [](const auto& a, const auto& b) {
    if (a.relative_fitness != b.relative_fitness) return a.relative_fitness > b.relative_fitness;
    return a.rank < b.rank;
  });
  records.insert(pos, std::move(record));
}

const std::vector<EliteRecord>& EliteArchive::generation(int generation) const {
  const auto it = generations_.find(generation);
  if (it == generations_.end()) throw MissingArchive("generation " + std::to_string(generation) + " not in archive");
  return it->second;
}

std::vector<int> EliteArchive::generations() const {
  std::vector<int> out;
  out.reserve(generations_.size());
  for (const auto& [g, _] : generations_) out.push_back(g);
  return out;
}

int EliteArchive::last_generation() const {
  if (generations_.empty()) throw MissingArchive("empty archive");
  return generations_.rbegin()->first;
}

std::size_t EliteArchive::size() const {
  std::size_t n = 0;
  for (const auto& [_, records] : generations_) n += records.size();
  return n;
}

}  // namespace symbiolife
