#include "symbiolife/population.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "symbiolife/errors.hpp"

namespace symbiolife {

// ---- CompetitionLedger ------------------------------------------------------

void CompetitionLedger::record(IndividualId red, IndividualId blue, GameResult result) {
  const bool red_is_a = red < blue;
  const Key key = red_is_a ? Key{red, blue} : Key{blue, red};
  PairResult r = PairResult::Tie;
  if (result == GameResult::RedWins) r = red_is_a ? PairResult::WinA : PairResult::WinB;
  if (result == GameResult::BlueWins) r = red_is_a ? PairResult::WinB : PairResult::WinA;
  records_[key].push_back(r);
  partners_[red].insert(blue);
  partners_[blue].insert(red);

  const double red_credit_value = red_credit(result);
  auto& t_red = tallies_[red];
  auto& t_blue = tallies_[blue];
  t_red.credit += red_credit_value;
  t_red.games += 1;
  t_blue.credit += 1.0 - red_credit_value;
  t_blue.games += 1;
  ++total_games_;
}

void CompetitionLedger::remove(IndividualId id) {
  const auto it = partners_.find(id);
  if (it == partners_.end()) {
    tallies_.erase(id);
    return;
  }
  for (IndividualId other : it->second) {
    const bool id_is_a = id < other;
    const Key key = id_is_a ? Key{id, other} : Key{other, id};
    const auto rec = records_.find(key);
    if (rec != records_.end()) {
      auto& t = tallies_[other];
      for (PairResult r : rec->second) {
        const bool other_won = (r == PairResult::WinA) != id_is_a && r != PairResult::Tie;
        t.credit -= r == PairResult::Tie ? 0.5 : other_won ? 1.0 : 0.0;
        t.games -= 1;
        --total_games_;
      }
      records_.erase(rec);
    }
    partners_[other].erase(id);
  }
  partners_.erase(it);
  tallies_.erase(id);
}

const std::vector<PairResult>& CompetitionLedger::results(IndividualId a, IndividualId b) const {
  static const std::vector<PairResult> kNone;
  const auto it = records_.find(a < b ? Key{a, b} : Key{b, a});
  return it == records_.end() ? kNone : it->second;
}

double CompetitionLedger::credit(IndividualId id) const {
  const auto it = tallies_.find(id);
  return it == tallies_.end() ? 0.0 : it->second.credit;
}

int CompetitionLedger::games(IndividualId id) const {
  const auto it = tallies_.find(id);
  return it == tallies_.end() ? 0 : it->second.games;
}

// ---- Population -------------------------------------------------------------

Population::Population(int target_size, int num_trials, GameFactors factors)
    : target_size_(target_size), num_trials_(num_trials), factors_(factors) {
  members_.reserve(static_cast<std::size_t>(target_size) + 1);
}

Population Population::initialize(const ExperimentConfig& config, Rng& rng) {
  Population pop(config.pop_size, config.num_trials, config.factors());
  for (int i = 0; i < config.pop_size; ++i) {
    Individual ind;
    ind.genome = random_seed(config.s_yspan, config.s_xspan, config.seed_density, rng);
    ind.origin = Origin::Random;
    pop.admit(std::move(ind));
  }
  return pop;
}

const Individual& Population::member(IndividualId id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) throw UnknownIndividual("no live member with id " + std::to_string(id));
  return members_[it->second];
}

double Population::relative_fitness(IndividualId id) const {
  if (!contains(id)) throw UnknownIndividual("no live member with id " + std::to_string(id));
  const int games = ledger_.games(id);
  return games == 0 ? 0.5 : ledger_.credit(id) / games;
}

double Population::mean_relative_fitness() const {
  double sum = 0.0;
  for (const auto& m : members_) sum += relative_fitness(m.id);
  return sum / static_cast<double>(members_.size());
}

IndividualId Population::tournament_select(int size, Rng& rng) const {
  std::vector<IndividualId> ids;
  ids.reserve(members_.size());
  for (const auto& m : members_) ids.push_back(m.id);
  return tournament_select_from(ids, size, rng);
}

IndividualId Population::tournament_select_from(std::span<const IndividualId> pool, int size, Rng& rng) const {
  if (pool.empty()) throw UnknownIndividual("tournament over an empty pool");
  std::vector<IndividualId> sample(pool.begin(), pool.end());
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(size, 1)), sample.size());
  // Partial Fisher-Yates: the first k entries become a uniform sample without replacement.
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(sample.size() - i);
    std::swap(sample[i], sample[j]);
  }
  std::vector<IndividualId> best;
  double best_fitness = -1.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double f = relative_fitness(sample[i]);
    if (f > best_fitness) {
      best_fitness = f;
      best.assign(1, sample[i]);
    } else if (f == best_fitness) {
      best.push_back(sample[i]);
    }
  }
  return best.size() == 1 ? best.front() : best[rng.below(best.size())];
}

IndividualId Population::least_fit(Rng& rng) const {
  std::vector<IndividualId> worst;
  double worst_fitness = 2.0;
  for (const auto& m : members_) {
    const double f = relative_fitness(m.id);
    if (f < worst_fitness) {
      worst_fitness = f;
      worst.assign(1, m.id);
    } else if (f == worst_fitness) {
      worst.push_back(m.id);
    }
  }
  return worst.size() == 1 ? worst.front() : worst[rng.below(worst.size())];
}

IndividualId Population::admit(Individual child) {
  child.id = next_id_++;
  for (const auto& m : members_) {
    for (int t = 0; t < num_trials_; ++t) {
      const GameOutcome o = run_game(m.genome, child.genome, factors_, t);
      ledger_.record(m.id, child.id, o.result);
    }
  }
  index_[child.id] = members_.size();
  const IndividualId id = child.id;
  members_.push_back(std::move(child));
  return id;
}

void Population::remove(IndividualId id) {
  const auto it = index_.find(id);
  if (it == index_.end()) throw UnknownIndividual("no live member with id " + std::to_string(id));
  members_.erase(members_.begin() + static_cast<std::ptrdiff_t>(it->second));
  ledger_.remove(id);
  index_.clear();
  for (std::size_t i = 0; i < members_.size(); ++i) index_[members_[i].id] = i;
}

IndividualId Population::insert_child(Individual child, Rng& rng) {
  child.birth_generation = generation();
  remove(least_fit(rng));
  const IndividualId id = admit(std::move(child));
  ++births_;
  return id;
}

double Population::evaluate_provisional(const SeedGenome& genome) const {
  double credit = 0.0;
  int games = 0;
  for (const auto& m : members_) {
    for (int t = 0; t < num_trials_; ++t) {
      const GameOutcome o = run_game(m.genome, genome, factors_, t);
      credit += 1.0 - red_credit(o.result);
      ++games;
    }
  }
  return games == 0 ? 0.5 : credit / games;
}

std::vector<const Individual*> Population::elite(int n) const {
  std::vector<std::pair<double, const Individual*>> ranked;
  ranked.reserve(members_.size());
  for (const auto& m : members_) ranked.emplace_back(relative_fitness(m.id), &m);
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second->id < b.second->id;
  });
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(std::max(n, 0)), ranked.size());
  std::vector<const Individual*> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(ranked[i].second);
  return out;
}

// ---- Layer chain ------------------------------------------------------------

int max_area(int generation, const ExperimentConfig& config) {
  if (config.num_generations <= 0) return config.max_area_first;
  const long span = config.max_area_last - config.max_area_first;
  // Integer arithmetic keeps the floor exact.
  const long num = span * generation;
  long q = num / config.num_generations;
  if (num % config.num_generations != 0 && num < 0) --q;
  return config.max_area_first + static_cast<int>(q);
}

const char* to_string(FusionClass c) {
  switch (c) {
    case FusionClass::NoPartsBenefit: return "no-parts-benefit";
    case FusionClass::OnePartBenefits: return "one-part-benefits";
    case FusionClass::BothPartsBenefit: return "both-parts-benefit";
  }
  return "";
}

const char* to_string(FusionRejection r) {
  switch (r) {
    case FusionRejection::None: return "";
    case FusionRejection::AreaLimit: return "area-limit";
    case FusionRejection::NoMutualBenefit: return "no-mutual-benefit";
  }
  return "";
}

FusionClass classify_fusion(double part_a, double part_b, double whole) {
  const int benefits = (whole > part_a ? 1 : 0) + (whole > part_b ? 1 : 0);
  return benefits == 2 ? FusionClass::BothPartsBenefit
         : benefits == 1 ? FusionClass::OnePartBenefits
                         : FusionClass::NoPartsBenefit;
}

namespace {

Individual make_child(SeedGenome genome, Origin origin) {
  Individual child;
  child.genome = std::move(genome);
  child.origin = origin;
  return child;
}

Individual layer1(const SeedGenome& parent, const ExperimentConfig& config, Rng& rng) {
  return make_child(mutate_flip(parent, config.mutation_rate, rng), Origin::Flip);
}

Individual layer2(const SeedGenome& parent, const ExperimentConfig& config, Rng& rng) {
  const double r = rng.uniform();
  if (r < config.prob_flip) return layer1(parent, config, rng);
  if (r < config.prob_flip + config.prob_shrink) {
    return make_child(shrink(parent, config.min_s_yspan, config.min_s_xspan, rng), Origin::Shrink);
  }
  return make_child(grow(parent, config.seed_density, rng), Origin::Grow);
}

Individual layer3(const Population& pop, const ExperimentConfig& config, Rng& rng) {
  const Individual& first = pop.member(pop.tournament_select(config.tournament_size, rng));
  std::vector<IndividualId> mates;
  for (const auto& m : pop.members()) {
    if (m.id == first.id) continue;
    const double s = similarity(first.genome, m.genome);
    if (s >= config.min_similarity && s <= config.max_similarity) mates.push_back(m.id);
  }
  if (mates.empty()) return layer2(first.genome, config, rng);
  const Individual& second = pop.member(pop.tournament_select_from(mates, config.tournament_size, rng));
  Individual child = layer2(crossover(first.genome, second.genome, rng), config, rng);
  child.origin = Origin::Crossover;
  return child;
}

Individual layer4(const Population& pop, const ExperimentConfig& config, Rng& rng,
                  std::vector<FusionEvent>& fusion_log) {
  // No draw when both rates are zero, so that case replays Layer 3 exactly.
  const bool active = config.prob_fission > 0.0 || config.prob_fusion > 0.0;
  const double r = active ? rng.uniform() : 1.0;
  if (!active || r >= config.prob_fission + config.prob_fusion) return layer3(pop, config, rng);

  const Individual& first = pop.member(pop.tournament_select(config.tournament_size, rng));
  if (r < config.prob_fission) {
    if (auto part = fission(first.genome, config.min_s_yspan, config.min_s_xspan, rng)) {
      return make_child(std::move(*part), Origin::Fission);
    }
    return layer3(pop, config, rng);
  }

  std::vector<IndividualId> others;
  for (const auto& m : pop.members())
    if (m.id != first.id) others.push_back(m.id);
  const Individual& second = pop.member(pop.tournament_select_from(others, config.tournament_size, rng));

  FusionEvent event;
  event.generation = pop.generation();
  event.birth = pop.births();
  event.part_a = first.id;
  event.part_b = second.id;
  event.part_a_fitness = pop.relative_fitness(first.id);
  event.part_b_fitness = pop.relative_fitness(second.id);

  SeedGenome a = first.genome;
  SeedGenome b = second.genome;
  if (config.fusion_test_flag == 1) {
    event.shuffled = true;
    if (rng.below(2) == 0) {
      a = shuffle(a, rng);
    } else {
      b = shuffle(b, rng);
    }
  }
  SeedGenome whole = fuse(a, b, rng);
  event.whole_area = whole.area();

  if (whole.area() > max_area(pop.generation(), config)) {
    event.rejection = FusionRejection::AreaLimit;
    fusion_log.push_back(event);
    return layer3(pop, config, rng);
  }

  const double whole_fitness = pop.evaluate_provisional(whole);
  event.whole_fitness = whole_fitness;
  event.classification = classify_fusion(event.part_a_fitness, event.part_b_fitness, whole_fitness);
  if (config.symbiosis_flag == 1 && *event.classification != FusionClass::BothPartsBenefit) {
    event.rejection = FusionRejection::NoMutualBenefit;
    fusion_log.push_back(event);
    return layer3(pop, config, rng);
  }
  event.accepted = true;
  fusion_log.push_back(event);
  return make_child(std::move(whole), Origin::Fusion);
}

}  // namespace

Individual produce_child(const Population& pop, const ExperimentConfig& config, Rng& rng,
                         std::vector<FusionEvent>& fusion_log) {
  switch (config.experiment_type_num) {
    case 1: return layer1(pop.member(pop.tournament_select(config.tournament_size, rng)).genome, config, rng);
    case 2: return layer2(pop.member(pop.tournament_select(config.tournament_size, rng)).genome, config, rng);
    case 3: return layer3(pop, config, rng);
    default: return layer4(pop, config, rng, fusion_log);
  }
}

// ---- Runs -------------------------------------------------------------------

GenerationMetrics measure_generation(const Population& pop, const ExperimentConfig& config, int elite_size) {
  GenerationMetrics m;
  m.generation = pop.generation();
  m.max_area_bound = max_area(std::min(m.generation, config.num_generations), config);
  const auto elite = pop.elite(elite_size);
  if (elite.empty()) return m;
  std::vector<double> fitness;
  fitness.reserve(elite.size());
  for (const Individual* ind : elite) {
    m.mean_area += ind->genome.area();
    m.mean_density += ind->genome.density();
    fitness.push_back(pop.relative_fitness(ind->id));
  }
  const double n = static_cast<double>(elite.size());
  m.mean_area /= n;
  m.mean_density /= n;
  m.mean_elite_fitness = std::accumulate(fitness.begin(), fitness.end(), 0.0) / n;
  if (elite.size() > 1) {
    double ss = 0.0;
    for (double f : fitness) ss += (f - m.mean_elite_fitness) * (f - m.mean_elite_fitness);
    m.diversity = std::sqrt(ss / (n - 1.0));
  }
  return m;
}

RunArtifacts run_experiment(const ExperimentConfig& config, Rng& rng, const GenerationObserver& observer) {
  validate(config);
  RunArtifacts out;
  Population pop = Population::initialize(config, rng);

  auto snapshot = [&](GenerationMetrics metrics) {
    const int generation = pop.generation();
    int rank = 0;
    for (const Individual* ind : pop.elite(config.elite_size)) {
      EliteRecord rec;
      rec.generation = generation;
      rec.rank = rank++;
      rec.id = ind->id;
      rec.genome = ind->genome;
      rec.relative_fitness = pop.relative_fitness(ind->id);
      rec.origin = ind->origin;
      rec.birth_generation = ind->birth_generation;
      out.archive.add(std::move(rec));
    }
    out.metrics.push_back(metrics);
    if (observer) observer(pop, generation);
  };

  snapshot(measure_generation(pop, config, config.elite_size));

  for (int g = 1; g <= config.num_generations; ++g) {
    const std::size_t events_before = out.fusion_events.size();
    int fissions = 0;
    for (int b = 0; b < config.pop_size; ++b) {
      Individual child = produce_child(pop, config, rng, out.fusion_events);
      fissions += child.origin == Origin::Fission ? 1 : 0;
      pop.insert_child(std::move(child), rng);
    }
    GenerationMetrics metrics = measure_generation(pop, config, config.elite_size);
    for (std::size_t i = events_before; i < out.fusion_events.size(); ++i) {
      ++metrics.fusion_attempts;
      metrics.fusion_accepted += out.fusion_events[i].accepted ? 1 : 0;
    }
    metrics.fission_births = fissions;
    snapshot(metrics);
  }
  return out;
}

}  // namespace symbiolife
