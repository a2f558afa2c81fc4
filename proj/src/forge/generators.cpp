#include "generators.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>

#include <fmt/format.h>

namespace plansteps::forge::detail {

namespace {

class Builder {
 public:
  explicit Builder(std::string domain) { problem_.domain_name = std::move(domain); }

  void object(std::string name, std::string type) {
    problem_.objects.push_back({std::move(name), std::move(type)});
  }
  void init(std::string predicate, std::vector<std::string> args = {}) {
    problem_.init.push_back({std::move(predicate), std::move(args)});
  }
  void goal(std::string predicate, std::vector<std::string> args = {}) {
    problem_.goal.push_back({std::move(predicate), std::move(args)});
  }
  pddl::ProblemDef take() {
    std::sort(problem_.init.begin(), problem_.init.end());
    problem_.init.erase(std::unique(problem_.init.begin(), problem_.init.end()), problem_.init.end());
    return std::move(problem_);
  }

 private:
  pddl::ProblemDef problem_;
};

std::string numbered(std::string_view prefix, int i) { return fmt::format("{}{}", prefix, i); }

// Random arrangement of blocks 0..n-1 into towers, each listed bottom-up.
std::vector<std::vector<int>> random_towers(Rng& rng, int n) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<std::vector<int>> towers;
  for (int b : order) {
    if (towers.empty() || rng.bernoulli(0.5)) towers.push_back({b});
    else towers.back().push_back(b);
  }
  return towers;
}

std::optional<pddl::ProblemDef> blocksworld(Rng& rng, Knobs& knobs, bool arm) {
  const int n = knobs.at("blocks");
  Builder b(arm ? "blocksworld4" : "blocksworld3");
  auto name = [](int i) { return numbered("b", i + 1); };
  for (int i = 0; i < n; ++i) b.object(name(i), "block");
  for (const auto& tower : random_towers(rng, n)) {
    b.init("on-table", {name(tower.front())});
    for (std::size_t k = 1; k < tower.size(); ++k) b.init("on", {name(tower[k]), name(tower[k - 1])});
    b.init("clear", {name(tower.back())});
  }
  if (arm) b.init("arm-empty");
  for (const auto& tower : random_towers(rng, n))
    for (std::size_t k = 1; k < tower.size(); ++k) b.goal("on", {name(tower[k]), name(tower[k - 1])});
  return b.take();
}

std::optional<pddl::ProblemDef> blocksworld3(Rng& rng, Knobs& knobs) { return blocksworld(rng, knobs, false); }
std::optional<pddl::ProblemDef> blocksworld4(Rng& rng, Knobs& knobs) { return blocksworld(rng, knobs, true); }

std::optional<pddl::ProblemDef> ferry(Rng& rng, Knobs& knobs) {
  const int locations = knobs.at("locations");
  const int cars = knobs.at("cars");
  Builder b("ferry");
  for (int i = 1; i <= locations; ++i) b.object(numbered("l", i), "location");
  for (int i = 1; i <= cars; ++i) b.object(numbered("c", i), "car");
  for (int i = 1; i <= locations; ++i)
    for (int j = 1; j <= locations; ++j)
      if (i != j) b.init("link", {numbered("l", i), numbered("l", j)});
  b.init("at-ferry", {numbered("l", rng.uniform_int(1, locations))});
  b.init("empty-ferry");
  for (int i = 1; i <= cars; ++i) {
    b.init("at", {numbered("c", i), numbered("l", rng.uniform_int(1, locations))});
    b.goal("at", {numbered("c", i), numbered("l", rng.uniform_int(1, locations))});
  }
  return b.take();
}

std::optional<pddl::ProblemDef> hanoi(Rng& rng, Knobs& knobs) {
  const int disks = knobs.at("disks");
  const bool transfer = knobs.at("transfer") != 0;
  Builder b("hanoi");
  for (int i = 1; i <= disks; ++i) b.object(numbered("d", i), "disk");
  for (int p = 1; p <= 3; ++p) b.object(numbered("peg", p), "peg");
  // d1 is the smallest disk.
  for (int i = 1; i <= disks; ++i) {
    for (int j = i + 1; j <= disks; ++j) b.init("smaller", {numbered("d", i), numbered("d", j)});
    for (int p = 1; p <= 3; ++p) b.init("smaller", {numbered("d", i), numbered("peg", p)});
  }
  auto place = [&](const std::vector<int>& peg_of, bool as_goal) {
    for (int p = 1; p <= 3; ++p) {
      std::string below = numbered("peg", p);
      for (int i = disks; i >= 1; --i) {
        if (peg_of[i] != p) continue;
        std::string disk = numbered("d", i);
        if (as_goal) b.goal("on", {disk, below});
        else b.init("on", {disk, below});
        below = disk;
      }
      if (!as_goal) b.init("clear", {below});
    }
  };
  std::vector<int> start(disks + 1, 1), target(disks + 1, 3);
  if (!transfer) {
    for (int i = 1; i <= disks; ++i) {
      start[i] = rng.uniform_int(1, 3);
      target[i] = rng.uniform_int(1, 3);
    }
  }
  place(start, false);
  place(target, true);
  return b.take();
}

std::optional<pddl::ProblemDef> logistics(Rng& rng, Knobs& knobs) {
  const int cities = knobs.at("cities");
  const int city_size = knobs.at("city-size");
  const int packages = knobs.at("packages");
  Builder b("logistics");
  std::vector<std::string> locations, airports;
  for (int c = 1; c <= cities; ++c) {
    std::string city = numbered("city", c);
    b.object(city, "city");
    std::string airport = numbered("apt", c);
    b.object(airport, "airport");
    b.init("in-city", {airport, city});
    locations.push_back(airport);
    airports.push_back(airport);
    std::vector<std::string> in_city{airport};
    for (int k = 1; k < city_size; ++k) {
      std::string loc = fmt::format("loc{}-{}", c, k);
      b.object(loc, "location");
      b.init("in-city", {loc, city});
      locations.push_back(loc);
      in_city.push_back(loc);
    }
    std::string truck = numbered("truck", c);
    b.object(truck, "truck");
    b.init("at", {truck, in_city[rng.uniform_index(in_city.size())]});
  }
  b.object("plane1", "airplane");
  b.init("at", {"plane1", airports[rng.uniform_index(airports.size())]});
  for (int p = 1; p <= packages; ++p) {
    std::string pkg = numbered("pkg", p);
    b.object(pkg, "package");
    std::size_t from = rng.uniform_index(locations.size());
    std::size_t to = rng.uniform_index(locations.size() - 1);
    if (to >= from) ++to;
    b.init("at", {pkg, locations[from]});
    b.goal("at", {pkg, locations[to]});
  }
  return b.take();
}

std::optional<pddl::ProblemDef> elevator(Rng& rng, Knobs& knobs) {
  const int floors = knobs.at("floors");
  const int passengers = knobs.at("passengers");
  Builder b("elevator");
  for (int f = 1; f <= floors; ++f) b.object(numbered("f", f), "floor");
  for (int p = 1; p <= passengers; ++p) b.object(numbered("p", p), "passenger");
  // f1 is the ground floor.
  for (int hi = 1; hi <= floors; ++hi)
    for (int lo = 1; lo < hi; ++lo) b.init("above", {numbered("f", hi), numbered("f", lo)});
  b.init("lift-at", {numbered("f", rng.uniform_int(1, floors))});
  for (int p = 1; p <= passengers; ++p) {
    int origin = rng.uniform_int(1, floors);
    int destin = rng.uniform_int(1, floors - 1);
    if (destin >= origin) ++destin;
    b.init("origin", {numbered("p", p), numbered("f", origin)});
    b.init("destin", {numbered("p", p), numbered("f", destin)});
    b.goal("served", {numbered("p", p)});
  }
  return b.take();
}

std::optional<pddl::ProblemDef> npuzzle(Rng& rng, Knobs& knobs) {
  const int width = knobs.at("width");
  const int height = knobs.at("height");
  const int cells = width * height;
  Builder b("npuzzle");
  auto pos = [&](int cell) { return fmt::format("p{}-{}", cell / width + 1, cell % width + 1); };
  for (int t = 1; t < cells; ++t) b.object(numbered("t", t), "tile");
  for (int c = 0; c < cells; ++c) b.object(pos(c), "position");
  auto neighbours = [&](int c) {
    std::vector<int> out;
    int r = c / width, col = c % width;
    if (r > 0) out.push_back(c - width);
    if (r + 1 < height) out.push_back(c + width);
    if (col > 0) out.push_back(c - 1);
    if (col + 1 < width) out.push_back(c + 1);
    return out;
  };
  for (int c = 0; c < cells; ++c)
    for (int n : neighbours(c)) b.init("neighbor", {pos(c), pos(n)});

  // Scramble by a random walk of the blank from the goal board, so every
  // emitted board lies in the solvable parity class.
  std::vector<int> board(cells);
  for (int c = 0; c + 1 < cells; ++c) board[c] = c + 1;
  board[cells - 1] = 0;
  int blank = cells - 1, previous = -1;
  const int steps = knobs.at("scramble");
  for (int s = 0; s < steps; ++s) {
    auto options = neighbours(blank);
    if (options.size() > 1) std::erase(options, previous);
    int next = options[rng.uniform_index(options.size())];
    std::swap(board[blank], board[next]);
    previous = blank;
    blank = next;
  }
  for (int c = 0; c < cells; ++c) {
    if (board[c] == 0) b.init("empty", {pos(c)});
    else b.init("at", {numbered("t", board[c]), pos(c)});
  }
  for (int c = 0; c + 1 < cells; ++c) b.goal("at", {numbered("t", c + 1), pos(c)});
  return b.take();
}

std::optional<pddl::ProblemDef> visitgrid(Rng& rng, Knobs& knobs) {
  const int width = knobs.at("width");
  const int height = knobs.at("height");
  const int cells = width * height;
  if (cells < 2) return std::nullopt;
  Builder b("visitgrid");
  auto cell = [](int c) { return numbered("c", c + 1); };
  for (int c = 0; c < cells; ++c) b.object(cell(c), "place");
  for (int c = 0; c < cells; ++c) {
    int r = c / width, col = c % width;
    if (col + 1 < width) {
      b.init("connected", {cell(c), cell(c + 1)});
      b.init("connected", {cell(c + 1), cell(c)});
    }
    if (r + 1 < height) {
      b.init("connected", {cell(c), cell(c + width)});
      b.init("connected", {cell(c + width), cell(c)});
    }
  }
  int start = rng.uniform_int(0, cells - 1);
  b.init("at-robot", {cell(start)});
  b.init("visited", {cell(start)});
  std::vector<int> others;
  for (int c = 0; c < cells; ++c)
    if (c != start) others.push_back(c);
  rng.shuffle(others);
  int targets = std::min<int>(knobs.at("targets"), static_cast<int>(others.size()));
  std::vector<int> chosen(others.begin(), others.begin() + targets);
  std::sort(chosen.begin(), chosen.end());
  for (int c : chosen) b.goal("visited", {cell(c)});
  return b.take();
}

std::optional<pddl::ProblemDef> sokoban(Rng& rng, Knobs& knobs) {
  const int width = knobs.at("width");
  const int height = knobs.at("height");
  const int cells = width * height;
  std::vector<bool> wall(cells, false);
  for (int w = 0; w < knobs.at("walls"); ++w) wall[rng.uniform_index(cells)] = true;

  auto free_cell = [&](int r, int c) { return r >= 0 && r < height && c >= 0 && c < width && !wall[r * width + c]; };
  std::vector<int> open;
  for (int c = 0; c < cells; ++c)
    if (!wall[c]) open.push_back(c);
  const int boxes = knobs.at("boxes");
  if (static_cast<int>(open.size()) < boxes + 2) return std::nullopt;
  {
    // Walls must not disconnect the floor.
    std::vector<bool> seen(cells, false);
    std::vector<int> stack{open.front()};
    seen[open.front()] = true;
    std::size_t reached = 0;
    while (!stack.empty()) {
      int c = stack.back();
      stack.pop_back();
      ++reached;
      const int dr[] = {-1, 1, 0, 0}, dc[] = {0, 0, -1, 1};
      for (int d = 0; d < 4; ++d) {
        int r = c / width + dr[d], col = c % width + dc[d];
        if (free_cell(r, col) && !seen[r * width + col]) {
          seen[r * width + col] = true;
          stack.push_back(r * width + col);
        }
      }
    }
    if (reached != open.size()) return std::nullopt;
  }

  static constexpr std::array<std::string_view, 4> kDirs = {"up", "down", "left", "right"};
  static constexpr int kDr[] = {-1, 1, 0, 0}, kDc[] = {0, 0, -1, 1};
  auto loc = [&](int c) { return fmt::format("l{}-{}", c / width + 1, c % width + 1); };
  auto step = [&](int c, int d) -> int {
    int r = c / width + kDr[d], col = c % width + kDc[d];
    return free_cell(r, col) ? r * width + col : -1;
  };

  // Goal placement, then random reverse play: the robot either walks or pulls
  // an adjacent box one cell towards itself. Replaying forwards is a plan.
  std::vector<int> shuffled = open;
  rng.shuffle(shuffled);
  std::vector<int> goal_pos(shuffled.begin(), shuffled.begin() + boxes);
  std::vector<int> box_pos = goal_pos;
  int robot = shuffled[boxes];
  auto box_at = [&](int c) { return std::find(box_pos.begin(), box_pos.end(), c) != box_pos.end(); };

  const int steps = knobs.at("steps");
  int pulls = 0, taken = 0;
  for (int s = 0; s < steps; ++s) {
    std::vector<std::pair<int, int>> walks, pull_moves;  // (direction, target cell)
    for (int d = 0; d < 4; ++d) {
      int to = step(robot, d);
      if (to < 0 || box_at(to)) continue;
      walks.emplace_back(d, to);
      int opposite = d ^ 1;  // up<->down, left<->right
      int from_box = step(robot, opposite);
      if (from_box >= 0 && box_at(from_box)) pull_moves.emplace_back(opposite, to);
    }
    if (walks.empty()) break;
    if (!pull_moves.empty() && rng.bernoulli(0.6)) {
      auto [d, to] = pull_moves[rng.uniform_index(pull_moves.size())];
      int from_box = step(robot, d);
      *std::find(box_pos.begin(), box_pos.end(), from_box) = robot;
      robot = to;
      ++pulls;
    } else {
      robot = walks[rng.uniform_index(walks.size())].second;
    }
    ++taken;
  }
  if (box_pos == goal_pos) return std::nullopt;
  knobs["pulls"] = pulls;
  knobs["reverse-steps"] = taken;

  Builder b("sokoban");
  for (int c : open) b.object(loc(c), "location");
  for (auto d : kDirs) b.object(std::string(d), "direction");
  for (int i = 1; i <= boxes; ++i) b.object(numbered("b", i), "box");
  for (int c : open)
    for (int d = 0; d < 4; ++d)
      if (int to = step(c, d); to >= 0) b.init("adjacent", {loc(c), loc(to), std::string(kDirs[d])});
  b.init("at-robot", {loc(robot)});
  for (int c : open)
    if (!box_at(c)) b.init("clear", {loc(c)});
  for (int i = 0; i < boxes; ++i) {
    b.init("at", {numbered("b", i + 1), loc(box_pos[i])});
    b.goal("at", {numbered("b", i + 1), loc(goal_pos[i])});
  }
  return b.take();
}

std::optional<pddl::ProblemDef> spanner(Rng& rng, Knobs& knobs) {
  const int locations = knobs.at("locations");
  const int nuts = knobs.at("nuts");
  const int spanners = knobs.at("spanners");
  const double backlink = knobs.at("backlink-pct") / 100.0;
  Builder b("spanner");
  for (int l = 1; l <= locations; ++l) b.object(numbered("l", l), "location");
  b.object("m1", "man");
  for (int n = 1; n <= nuts; ++n) b.object(numbered("n", n), "nut");
  for (int s = 1; s <= spanners; ++s) b.object(numbered("s", s), "spanner");
  // A corridor from l1 to the gate; walking back is only possible where a
  // backward link exists.
  for (int l = 1; l < locations; ++l) {
    b.init("link", {numbered("l", l), numbered("l", l + 1)});
    if (rng.bernoulli(backlink)) b.init("link", {numbered("l", l + 1), numbered("l", l)});
  }
  b.init("at", {"m1", "l1"});
  int uses = 0;
  for (int s = 1; s <= spanners; ++s) {
    std::string name = numbered("s", s);
    b.init("at", {name, numbered("l", rng.uniform_int(1, locations - 1))});
    bool two = rng.bernoulli(0.5);
    b.init(two ? "useable2" : "useable1", {name});
    uses += two ? 2 : 1;
  }
  if (uses < nuts) return std::nullopt;
  for (int n = 1; n <= nuts; ++n) {
    std::string name = numbered("n", n);
    b.init("at", {name, numbered("l", locations)});
    b.init("loose", {name});
    b.goal("tightened", {name});
  }
  return b.take();
}

std::optional<pddl::ProblemDef> rooms(Rng& rng, Knobs& knobs) {
  const int n = knobs.at("rooms");
  auto room = [](int r) { return numbered("r", r + 1); };
  std::set<std::pair<int, int>> doors;
  // Random spanning tree, then a few extra doors.
  for (int r = 1; r < n; ++r) {
    int parent = rng.uniform_int(0, r - 1);
    doors.insert({std::min(r, parent), std::max(r, parent)});
  }
  for (int e = 0; e < knobs.at("extra-doors"); ++e) {
    int a = rng.uniform_int(0, n - 1), c = rng.uniform_int(0, n - 1);
    if (a != c) doors.insert({std::min(a, c), std::max(a, c)});
  }

  // Lit rooms are picked along a random walk that breaks doors as it goes, so
  // at least one order of switching them off exists.
  const int start = rng.uniform_int(0, n - 1);
  std::set<std::pair<int, int>> intact = doors;
  std::vector<int> trail{start};
  for (int current = start;;) {
    std::vector<int> next;
    for (const auto& [a, c] : intact) {
      if (a == current) next.push_back(c);
      if (c == current) next.push_back(a);
    }
    if (next.empty() || rng.bernoulli(0.2)) break;
    int to = next[rng.uniform_index(next.size())];
    intact.erase({std::min(current, to), std::max(current, to)});
    current = to;
    if (std::find(trail.begin(), trail.end(), to) == trail.end()) trail.push_back(to);
  }
  rng.shuffle(trail);
  const int lit_count = std::min<int>(knobs.at("lit"), static_cast<int>(trail.size()));
  std::set<int> lit(trail.begin(), trail.begin() + lit_count);

  Builder b("rooms");
  b.object("a1", "agent");
  for (int r = 0; r < n; ++r) b.object(room(r), "room");
  for (const auto& [a, c] : doors) {
    for (auto [x, y] : {std::pair{a, c}, std::pair{c, a}}) {
      b.init("door", {room(x), room(y)});
      b.init("door-intact", {room(x), room(y)});
    }
  }
  b.init("at", {"a1", room(start)});
  for (int r = 0; r < n; ++r) {
    if (lit.count(r)) {
      b.init("on", {room(r)});
      b.goal("off", {room(r)});
    } else {
      b.init("off", {room(r)});
    }
  }
  return b.take();
}

}  // namespace

Generator generator_for(std::string_view domain_id) {
  static const std::map<std::string_view, Generator> kGenerators = {
      {"blocksworld3", blocksworld3}, {"blocksworld4", blocksworld4}, {"ferry", ferry},
      {"hanoi", hanoi},               {"logistics", logistics},       {"elevator", elevator},
      {"npuzzle", npuzzle},           {"visitgrid", visitgrid},       {"sokoban", sokoban},
      {"spanner", spanner},           {"rooms", rooms},
  };
  auto it = kGenerators.find(domain_id);
  return it == kGenerators.end() ? nullptr : it->second;
}

}  // namespace plansteps::forge::detail
