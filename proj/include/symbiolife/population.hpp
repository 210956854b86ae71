#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "symbiolife/archive.hpp"
#include "symbiolife/config.hpp"
#include "symbiolife/genome.hpp"
#include "symbiolife/life_engine.hpp"
#include "symbiolife/rng.hpp"

namespace symbiolife {

struct Individual {
  IndividualId id = 0;
  SeedGenome genome;
  int birth_generation = 0;
  Origin origin = Origin::Random;
};

/// Outcome of one recorded game, from the point of view of the smaller id (A).
enum class PairResult : std::uint8_t { WinA, WinB, Tie };

/// Every game played between live members. Win credit per game sums to 1
/// (a tie credits 0.5 to each side).
class CompetitionLedger {
 public:
  /// `red` played the Red side of the game that produced `result`.
  void record(IndividualId red, IndividualId blue, GameResult result);
  void remove(IndividualId id);

  const std::vector<PairResult>& results(IndividualId a, IndividualId b) const;
  double credit(IndividualId id) const;
  int games(IndividualId id) const;
  std::size_t total_games() const { return total_games_; }

 private:
  struct Tally {
    double credit = 0.0;
    int games = 0;
  };
  using Key = std::pair<IndividualId, IndividualId>;

  std::map<Key, std::vector<PairResult>> records_;
  std::unordered_map<IndividualId, std::set<IndividualId>> partners_;
  std::unordered_map<IndividualId, Tally> tallies_;
  std::size_t total_games_ = 0;
};

/// Steady-state population with its full pairwise game record.
class Population {
 public:
  Population(int target_size, int num_trials, GameFactors factors);

  /// Random seeds of s_yspan x s_xspan at seed_density; every pair plays num_trials games.
  static Population initialize(const ExperimentConfig& config, Rng& rng);

  const std::vector<Individual>& members() const { return members_; }
  const Individual& member(IndividualId id) const;
  bool contains(IndividualId id) const { return index_.count(id) != 0; }
  const CompetitionLedger& ledger() const { return ledger_; }
  int target_size() const { return target_size_; }
  int num_trials() const { return num_trials_; }
  const GameFactors& factors() const { return factors_; }

  std::uint64_t births() const { return births_; }
  /// births / target_size, integer division.
  int generation() const { return static_cast<int>(births_ / static_cast<std::uint64_t>(target_size_)); }

  /// (wins + 0.5 ties) / games played. 0.5 for a member with no games yet.
  double relative_fitness(IndividualId id) const;
  double mean_relative_fitness() const;

  /// Samples min(size, |pool|) members without replacement and returns the fittest;
  /// ties are broken uniformly.
  IndividualId tournament_select(int size, Rng& rng) const;
  IndividualId tournament_select_from(std::span<const IndividualId> pool, int size, Rng& rng) const;

  IndividualId least_fit(Rng& rng) const;

  /// Adds a member without eviction; it plays num_trials games against every current
  /// member. Returns the id it was assigned.
  IndividualId admit(Individual child);

  /// Evicts the least-fit member, admits `child` and counts one birth.
  IndividualId insert_child(Individual child, Rng& rng);

  /// Win fraction of `genome` against the current members, without touching the ledger.
  double evaluate_provisional(const SeedGenome& genome) const;

  /// The n fittest members, descending fitness, ties by ascending id.
  std::vector<const Individual*> elite(int n) const;

 private:
  void remove(IndividualId id);

  int target_size_;
  int num_trials_;
  GameFactors factors_;
  std::vector<Individual> members_;
  std::unordered_map<IndividualId, std::size_t> index_;
  CompetitionLedger ledger_;
  std::uint64_t births_ = 0;
  IndividualId next_id_ = 1;
};

/// Area bound interpolated linearly between max_area_first and max_area_last, rounded down.
int max_area(int generation, const ExperimentConfig& config);

enum class FusionClass { NoPartsBenefit, OnePartBenefits, BothPartsBenefit };
enum class FusionRejection { None, AreaLimit, NoMutualBenefit };

const char* to_string(FusionClass c);
const char* to_string(FusionRejection r);

/// Counts the parts the whole out-scores.
FusionClass classify_fusion(double part_a, double part_b, double whole);

struct FusionEvent {
  int generation = 0;
  std::uint64_t birth = 0;
  IndividualId part_a = 0;
  IndividualId part_b = 0;
  double part_a_fitness = 0.0;
  double part_b_fitness = 0.0;
  std::optional<double> whole_fitness;          // absent when the area bound stopped the fusion
  std::optional<FusionClass> classification;    // likewise
  bool accepted = false;
  FusionRejection rejection = FusionRejection::None;
  int whole_area = 0;
  bool shuffled = false;
};

/// Builds the next child through the layer chain selected by experiment_type_num.
/// Every fusion attempt is appended to `fusion_log`. The child's id is assigned on insertion.
Individual produce_child(const Population& pop, const ExperimentConfig& config, Rng& rng,
                         std::vector<FusionEvent>& fusion_log);

struct GenerationMetrics {
  int generation = 0;
  double mean_area = 0.0;
  double mean_density = 0.0;
  double diversity = 0.0;  // sample std-dev of elite relative fitness
  double mean_elite_fitness = 0.0;
  int max_area_bound = 0;
  int fusion_attempts = 0;  // during the births that led to this generation
  int fusion_accepted = 0;
  int fission_births = 0;
};

GenerationMetrics measure_generation(const Population& pop, const ExperimentConfig& config, int elite_size);

struct RunArtifacts {
  EliteArchive archive;
  std::vector<FusionEvent> fusion_events;
  std::vector<GenerationMetrics> metrics;
};

/// Called once per completed generation, including generation 0.
using GenerationObserver = std::function<void(const Population&, int generation)>;

/// Full run: initialize, then pop_size x num_generations births, snapshotting the elite
/// after every generation.
RunArtifacts run_experiment(const ExperimentConfig& config, Rng& rng, const GenerationObserver& observer = {});

}  // namespace symbiolife
