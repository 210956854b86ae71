#include "symbiolife/fitness_measures.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "symbiolife/errors.hpp"

namespace symbiolife {

namespace {

constexpr long kMaxPatternCells = 100'000'000;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

long parse_dim(std::string_view value, const std::string& name) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || v < 1) {
    throw MalformedRle(name + ": bad header value '" + std::string(value) + "'");
  }
  return v;
}

struct Header {
  long width = 0;
  long height = 0;
};

Header parse_header(std::string_view line, const std::string& name) {
  Header h;
  bool have_x = false, have_y = false;
  while (!line.empty()) {
    const auto comma = line.find(',');
    const std::string_view item = trim(line.substr(0, comma));
    line = comma == std::string_view::npos ? std::string_view{} : line.substr(comma + 1);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw MalformedRle(name + ": bad header item '" + std::string(item) + "'");
    const std::string key = lower(trim(item.substr(0, eq)));
    const std::string_view value = trim(item.substr(eq + 1));
    if (key == "x") {
      h.width = parse_dim(value, name);
      have_x = true;
    } else if (key == "y") {
      h.height = parse_dim(value, name);
      have_y = true;
    } else if (key == "rule") {
      const std::string rule = lower(value);
      if (rule != "b3/s23" && rule != "23/3") throw UnsupportedRule(name + ": rule " + std::string(value));
    } else {
      throw MalformedRle(name + ": unknown header key '" + key + "'");
    }
  }
  if (!have_x || !have_y) throw MalformedRle(name + ": header needs x and y");
  if (h.width * h.height > kMaxPatternCells) throw MalformedRle(name + ": pattern too large");
  return h;
}

}  // namespace

RlePattern parse_rle(std::string_view text, std::string name) {
  const std::string label = name.empty() ? std::string("rle") : name;

  std::optional<Header> header;
  std::string body;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    line = trim(line);
    if (line.empty()) continue;
    if (!header) {
      if (line.front() == '#') continue;
      header = parse_header(line, label);
      continue;
    }
    body.append(line);
  }
  if (!header) throw MalformedRle(label + ": missing header");

  SeedGenome bits(static_cast<int>(header->height), static_cast<int>(header->width));
  long row = 0, col = 0, count = 0;
  bool have_count = false, terminated = false;
  for (char ch : body) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      count = count * 10 + (ch - '0');
      if (count > kMaxPatternCells) throw MalformedRle(label + ": run count overflow");
      have_count = true;
      continue;
    }
    if (ch == '!') {
      if (have_count) throw MalformedRle(label + ": run count before '!'");
      terminated = true;
      break;
    }
    const long n = have_count ? count : 1;
    if (have_count && n == 0) throw MalformedRle(label + ": zero run count");
    count = 0;
    have_count = false;
    if (ch == '$') {
      row += n;
      col = 0;
      continue;
    }
    if (ch != 'b' && ch != 'o') throw MalformedRle(label + std::string(": unexpected token '") + ch + "'");
    if (col + n > header->width) throw MalformedRle(label + ": row " + std::to_string(row) + " overflows x");
    if (ch == 'o') {
      if (row >= header->height) throw MalformedRle(label + ": rows overflow y");
      for (long k = 0; k < n; ++k) bits.set(static_cast<int>(row), static_cast<int>(col + k), 1);
    }
    col += n;
  }
  if (!terminated) throw MalformedRle(label + ": missing '!'");
  return {std::move(name), std::move(bits)};
}

RlePattern load_rle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pattern file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_rle(buf.str(), path.stem().string());
}

std::string emit_rle(const RlePattern& pattern) {
  std::vector<std::string> tokens;
  auto run = [&](long n, char tag) { tokens.push_back((n > 1 ? std::to_string(n) : std::string()) + tag); };

  long pending_rows = 0;
  for (int r = 0; r < pattern.height(); ++r) {
    int last = -1;
    for (int c = 0; c < pattern.width(); ++c)
      if (pattern.bits.at(r, c)) last = c;
    if (last < 0) {
      ++pending_rows;
      continue;
    }
    if (r > 0 && !tokens.empty()) run(pending_rows + 1, '$');
    else if (pending_rows > 0) run(pending_rows, '$');
    pending_rows = 0;
    int c = 0;
    while (c <= last) {
      const std::uint8_t v = pattern.bits.at(r, c);
      int len = 0;
      while (c + len <= last && pattern.bits.at(r, c + len) == v) ++len;
      run(len, v ? 'o' : 'b');
      c += len;
    }
  }
  tokens.emplace_back("!");

  std::string out = "x = " + std::to_string(pattern.width()) + ", y = " + std::to_string(pattern.height()) +
                    ", rule = B3/S23\n";
  std::size_t line_len = 0;
  for (const auto& t : tokens) {
    if (line_len + t.size() > 70) {
      out += '\n';
      line_len = 0;
    }
    out += t;
    line_len += t.size();
  }
  out += '\n';
  return out;
}

std::vector<RlePattern> load_pattern_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) throw IoError("pattern directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".rle") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  std::vector<RlePattern> out;
  out.reserve(files.size());
  for (const auto& f : files) out.push_back(load_rle(f));
  return out;
}

double fitness_vs_random(const SeedGenome& genome, int opponents, const GameFactors& factors, Rng& rng) {
  double credit = 0.0;
  for (int k = 0; k < opponents; ++k) {
    const SeedGenome opponent = random_seed_exact(genome.rows(), genome.cols(), genome.live_count(), rng);
    credit += red_credit(run_game(genome, opponent, factors, k).result);
  }
  return credit / opponents;
}

std::vector<PatternScore> pattern_tournament(const std::vector<SeedGenome>& champions,
                                             const std::vector<RlePattern>& patterns, int area_limit,
                                             int games_per_pairing, const GameFactors& factors) {
  // Games are deterministic and only the parity of the trial index matters.
  const int even_games = (games_per_pairing + 1) / 2;
  const int odd_games = games_per_pairing / 2;
  std::vector<PatternScore> out;
  for (const auto& p : patterns) {
    if (p.area() > area_limit) continue;
    PatternScore score{p.name, p.area(), 0, 0.0};
    double credit = 0.0;
    for (const auto& champion : champions) {
      if (even_games > 0) credit += even_games * red_credit(run_game(champion, p.bits, factors, 0).result);
      if (odd_games > 0) credit += odd_games * red_credit(run_game(champion, p.bits, factors, 1).result);
      score.games += games_per_pairing;
    }
    score.evolved_win_rate = score.games == 0 ? 0.0 : credit / score.games;
    out.push_back(std::move(score));
  }
  return out;
}

double estimate_p(const std::vector<EliteRecord>& earlier, const std::vector<EliteRecord>& later, int top,
                  const GameFactors& factors) {
  const std::size_t ni = std::min<std::size_t>(earlier.size(), static_cast<std::size_t>(top));
  const std::size_t nn = std::min<std::size_t>(later.size(), static_cast<std::size_t>(top));
  if (ni == 0 || nn == 0) throw MissingArchive("estimate_p needs non-empty generations");
  double credit = 0.0;
  for (std::size_t a = 0; a < nn; ++a) {
    for (std::size_t b = 0; b < ni; ++b) {
      for (int t = 0; t < 2; ++t) credit += red_credit(run_game(later[a].genome, earlier[b].genome, factors, t).result);
    }
  }
  return credit / static_cast<double>(nn * ni * 2);
}

double unbounded_fitness(const EliteArchive& archive, int n, int top, const GameFactors& factors) {
  double f = 0.0;
  const auto& later = archive.generation(n);
  for (int i = 0; i < n; ++i) f += 2.0 * estimate_p(archive.generation(i), later, top, factors) - 1.0;
  return f;
}

}  // namespace symbiolife
