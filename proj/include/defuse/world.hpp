#pragma once

// Deterministic engine for the cooperative bomb-defusal game: rooms form a
// connected graph, color-coded bombs require ordered tool applications, and a
// team of agents moves, inspects and cuts in fixed turn order. All stepping is
// purely functional: operations take a state by const reference and return a
// new state.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace defuse {

using RoomId = int;
using Color = int;

enum class ApplyMode { guarded, explosive };
enum class BombState { intact, partially_cut, defused, exploded };
enum class Termination { running, all_defused, time_limit, deadlock };

constexpr int kPointsPerPhase = 10;

inline const std::vector<std::string>& default_color_names() {
  static const std::vector<std::string> names = {"red", "green", "blue"};
  return names;
}

struct BombSpec {
  int id = 0;
  RoomId location = 0;
  std::vector<Color> sequence;
};

struct AgentSpec {
  std::string call_sign;
  RoomId start_room = 0;
  std::vector<Color> tools;
};

struct WorldConfig {
  int n_rooms = 0;
  int n_colors = 0;
  std::vector<RoomId> rooms;
  std::vector<std::pair<RoomId, RoomId>> edges;  // unordered pairs
  std::vector<BombSpec> bombs;
  std::vector<AgentSpec> agents;
  int round_limit = 30;
  int deadlock_window = 3;
  ApplyMode apply_mode = ApplyMode::guarded;
  std::uint64_t seed = 0;
  std::vector<std::string> color_names;  // defaults to red/green/blue

  bool has_room(RoomId r) const {
    return std::find(rooms.begin(), rooms.end(), r) != rooms.end();
  }

  bool adjacent(RoomId a, RoomId b) const {
    for (const auto& e : edges) {
      if ((e.first == a && e.second == b) || (e.first == b && e.second == a)) return true;
    }
    return false;
  }

  // Sorted ascending so iteration order is deterministic.
  std::vector<RoomId> neighbors(RoomId r) const {
    std::vector<RoomId> out;
    for (const auto& e : edges) {
      if (e.first == r) out.push_back(e.second);
      if (e.second == r) out.push_back(e.first);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  const std::string& color_name(Color c) const {
    static const std::string unknown = "?";
    if (!color_names.empty()) {
      if (c >= 0 && c < static_cast<int>(color_names.size())) return color_names[c];
      return unknown;
    }
    const auto& defaults = default_color_names();
    if (c >= 0 && c < static_cast<int>(defaults.size())) return defaults[c];
    return unknown;
  }

  std::optional<Color> color_from_name(const std::string& name) const {
    for (Color c = 0; c < n_colors; ++c) {
      if (color_name(c) == name) return c;
    }
    return std::nullopt;
  }

  int max_score() const {
    int total = 0;
    for (const auto& b : bombs) total += kPointsPerPhase * static_cast<int>(b.sequence.size());
    return total;
  }

  const AgentSpec* agent_spec(const std::string& call_sign) const {
    for (const auto& a : agents)
      if (a.call_sign == call_sign) return &a;
    return nullptr;
  }
};

// Validates config invariants; returns a list of human-readable issues,
// empty when the config is acceptable.
std::vector<std::string> validate_config(const WorldConfig& config);

struct Action {
  enum class Kind { move, inspect, apply, invalid };

  Kind kind = Kind::invalid;
  RoomId room = -1;     // move target
  Color color = -1;     // apply color
  std::string reason;   // why parsing failed, for invalid only

  static Action move_to(RoomId r) {
    Action a;
    a.kind = Kind::move;
    a.room = r;
    return a;
  }
  static Action inspect() {
    Action a;
    a.kind = Kind::inspect;
    return a;
  }
  static Action apply_tool(Color c) {
    Action a;
    a.kind = Kind::apply;
    a.color = c;
    return a;
  }
  static Action invalid(std::string reason) {
    Action a;
    a.kind = Kind::invalid;
    a.reason = std::move(reason);
    return a;
  }

  friend bool operator==(const Action& x, const Action& y) {
    return x.kind == y.kind && x.room == y.room && x.color == y.color;
  }
  friend bool operator!=(const Action& x, const Action& y) { return !(x == y); }

  // Compact stable encoding used for fingerprints and transcripts.
  std::string encode() const {
    switch (kind) {
      case Kind::move:
        return "M:" + std::to_string(room);
      case Kind::inspect:
        return "I";
      case Kind::apply:
        return "A:" + std::to_string(color);
      case Kind::invalid:
        return "X:" + reason;
    }
    return "X:";
  }
};

enum class ErrorKind {
  not_adjacent,
  no_bomb_to_inspect,
  no_bomb_to_defuse,
  wrong_sequence,
  missing_tool,
  unparseable,
};

// Placeholder values for the error-feedback templates.
struct ErrorContext {
  RoomId target_room = -1;
  RoomId current_room = -1;
  Color tool = -1;
  int bomb_id = -1;
  std::vector<Color> sequence;  // remaining sequence, revealed by wrong_sequence
};

struct Effect {
  enum class Kind { moved_to, sequence_revealed, phase_cut, bomb_defused, bomb_exploded };

  Kind kind;
  RoomId room = -1;             // moved_to: destination; otherwise the bomb's room
  int bomb_id = -1;
  Color color = -1;             // phase_cut
  std::vector<Color> sequence;  // sequence_revealed: remaining sequence at reveal
  int points = 0;               // bomb_defused
};

struct ActionOutcome {
  std::string agent;
  Action action;
  bool ok = false;
  std::optional<ErrorKind> error;  // engaged iff !ok
  ErrorContext error_context;
  std::vector<Effect> effects;
  int score_delta = 0;
};

struct Bomb {
  int id = 0;
  RoomId location = 0;
  std::vector<Color> full_sequence;
  std::vector<Color> remaining_sequence;
  BombState state = BombState::intact;

  bool live() const { return state == BombState::intact || state == BombState::partially_cut; }
};

struct AgentState {
  std::string call_sign;
  RoomId location = 0;
  std::vector<Color> tools;

  bool has_tool(Color c) const {
    return std::find(tools.begin(), tools.end(), c) != tools.end();
  }
};

// Structured claim attached to a chat message. Scripted agents attach these so
// downstream knowledge tracking can grade communication without parsing prose;
// free-text-only messages carry none.
struct Claim {
  enum class Kind {
    room_contents,       // room holds exactly bomb_ids (as of `round`)
    bomb_sequence,       // bomb's remaining sequence is `sequence` (as of `round`)
    bomb_state_changed,  // bomb was cut/defused/exploded at `round`
    phase_defused,       // some bomb phase was cut at `round`
    intent_move,         // sender is moving to `room` this round
    intent_inspect,      // sender is inspecting `bomb_id` this round
    intent_apply,        // sender is applying `sequence[0]` to `bomb_id` this round
  };

  Kind kind = Kind::room_contents;
  int bomb_id = -1;
  RoomId room = -1;
  int round = -1;  // as-of round of the claimed fact
  std::vector<Color> sequence;
  std::vector<int> bomb_ids;

  friend bool operator==(const Claim& a, const Claim& b) {
    return a.kind == b.kind && a.bomb_id == b.bomb_id && a.room == b.room &&
           a.round == b.round && a.sequence == b.sequence && a.bomb_ids == b.bomb_ids;
  }
};

struct Message {
  std::string sender;
  int round_sent = 0;
  std::string text;
  std::vector<Claim> claims;
};

// One agent's contribution to a round: a parsed action plus an outbound
// message (empty text and no claims means nothing is sent).
struct Turn {
  std::string agent;
  Action action;
  std::string message;
  std::vector<Claim> claims;
};

struct RoundResult {
  std::vector<ActionOutcome> outcomes;
  std::vector<Message> sent;  // delivered in everyone's next-round observations
};

struct WorldState {
  WorldConfig config;
  int round = 1;  // 1-based
  int score = 0;
  std::vector<Bomb> bombs;
  std::vector<AgentState> agents;
  std::vector<Message> inbox;    // sent last round, visible this round
  std::vector<Message> pending;  // sent this round, delivered next round
  std::vector<std::string> round_fingerprints;  // one per completed round

  const Bomb* bomb(int id) const {
    for (const auto& b : bombs)
      if (b.id == id) return &b;
    return nullptr;
  }

  const AgentState* agent(const std::string& call_sign) const {
    for (const auto& a : agents)
      if (a.call_sign == call_sign) return &a;
    return nullptr;
  }

  std::vector<const Bomb*> live_bombs_in(RoomId r) const {
    std::vector<const Bomb*> out;
    for (const auto& b : bombs)
      if (b.location == r && b.live()) out.push_back(&b);
    return out;
  }

  std::vector<std::string> agents_in(RoomId r) const {
    std::vector<std::string> out;
    for (const auto& a : agents)
      if (a.location == r) out.push_back(a.call_sign);
    return out;
  }

  bool all_bombs_resolved() const {
    for (const auto& b : bombs)
      if (b.live()) return false;
    return true;
  }
};

// What one agent is entitled to see at the start of a round: own room
// contents, global teammate locations, global score and broadcast messages.
struct Observation {
  std::string agent;
  int round = 1;
  int score = 0;
  RoomId room = 0;
  std::vector<int> bombs_present;  // live bombs in the agent's room, ascending id
  std::map<std::string, RoomId> teammate_locations;  // includes self
  std::vector<Message> messages;  // delivered this round
};

// ---------------------------------------------------------------------------

inline std::vector<std::string> validate_config(const WorldConfig& config) {
  std::vector<std::string> issues;
  auto complain = [&issues](const std::string& text) { issues.push_back(text); };

  if (config.rooms.empty()) complain("room list is empty");
  if (config.n_rooms != static_cast<int>(config.rooms.size()))
    complain("n_rooms does not match the room list");
  {
    std::set<RoomId> seen(config.rooms.begin(), config.rooms.end());
    if (seen.size() != config.rooms.size()) complain("duplicate room ids");
  }
  for (const auto& e : config.edges) {
    if (e.first == e.second) complain("self-loop edge on room " + std::to_string(e.first));
    if (!config.has_room(e.first) || !config.has_room(e.second))
      complain("edge references unlisted room");
  }

  // Connectivity via BFS from the first room.
  if (!config.rooms.empty()) {
    std::set<RoomId> reached{config.rooms.front()};
    std::vector<RoomId> frontier{config.rooms.front()};
    while (!frontier.empty()) {
      RoomId r = frontier.back();
      frontier.pop_back();
      for (RoomId n : config.neighbors(r)) {
        if (reached.insert(n).second) frontier.push_back(n);
      }
    }
    if (reached.size() != config.rooms.size()) complain("room graph is not connected");
  }

  if (config.n_colors < 0) complain("negative color count");
  if (config.n_colors > 3 && config.color_names.size() < static_cast<size_t>(config.n_colors))
    complain("color count above 3 requires an explicit color-name table");

  std::set<int> bomb_ids;
  for (const auto& b : config.bombs) {
    if (!bomb_ids.insert(b.id).second) complain("duplicate bomb id " + std::to_string(b.id));
    if (!config.has_room(b.location))
      complain("bomb " + std::to_string(b.id) + " placed in unlisted room " +
               std::to_string(b.location));
    if (b.sequence.empty()) complain("bomb " + std::to_string(b.id) + " has an empty sequence");
    for (Color c : b.sequence) {
      if (c < 0 || c >= config.n_colors)
        complain("bomb " + std::to_string(b.id) + " uses out-of-range color " + std::to_string(c));
    }
  }

  if (config.agents.empty()) complain("no agents configured");
  std::set<std::string> signs;
  for (const auto& a : config.agents) {
    if (a.call_sign.empty()) complain("agent with empty call sign");
    if (!signs.insert(a.call_sign).second) complain("duplicate call sign " + a.call_sign);
    if (!config.has_room(a.start_room))
      complain("agent " + a.call_sign + " starts in unlisted room " +
               std::to_string(a.start_room));
    if (a.tools.empty()) complain("agent " + a.call_sign + " has no tools");
    for (Color c : a.tools) {
      if (c < 0 || c >= config.n_colors)
        complain("agent " + a.call_sign + " holds out-of-range color " + std::to_string(c));
    }
  }

  if (config.round_limit < 1) complain("round_limit must be >= 1");
  if (config.deadlock_window < 1) complain("deadlock_window must be >= 1");
  return issues;
}

inline WorldState new_world(const WorldConfig& config) {
  auto issues = validate_config(config);
  if (!issues.empty()) {
    std::string joined = "invalid world config:";
    for (const auto& s : issues) joined += "\n  - " + s;
    throw std::invalid_argument(joined);
  }
  WorldState state;
  state.config = config;
  state.round = 1;
  state.score = 0;
  for (const auto& spec : config.bombs) {
    Bomb b;
    b.id = spec.id;
    b.location = spec.location;
    b.full_sequence = spec.sequence;
    b.remaining_sequence = spec.sequence;
    b.state = BombState::intact;
    state.bombs.push_back(std::move(b));
  }
  std::sort(state.bombs.begin(), state.bombs.end(),
            [](const Bomb& a, const Bomb& b) { return a.id < b.id; });
  for (const auto& spec : config.agents) {
    AgentState a;
    a.call_sign = spec.call_sign;
    a.location = spec.start_room;
    a.tools = spec.tools;
    std::sort(a.tools.begin(), a.tools.end());
    a.tools.erase(std::unique(a.tools.begin(), a.tools.end()), a.tools.end());
    state.agents.push_back(std::move(a));
  }
  return state;
}

inline Observation observe(const WorldState& state, const std::string& call_sign) {
  const AgentState* me = state.agent(call_sign);
  if (me == nullptr) throw std::invalid_argument("unknown agent " + call_sign);
  Observation obs;
  obs.agent = call_sign;
  obs.round = state.round;
  obs.score = state.score;
  obs.room = me->location;
  for (const Bomb* b : state.live_bombs_in(me->location)) obs.bombs_present.push_back(b->id);
  std::sort(obs.bombs_present.begin(), obs.bombs_present.end());
  for (const auto& a : state.agents) obs.teammate_locations[a.call_sign] = a.location;
  obs.messages = state.inbox;
  return obs;
}

inline std::vector<Action> legal_actions(const WorldState& state, const std::string& call_sign) {
  const AgentState* me = state.agent(call_sign);
  if (me == nullptr) throw std::invalid_argument("unknown agent " + call_sign);
  std::vector<Action> out;
  for (RoomId r : state.config.neighbors(me->location)) out.push_back(Action::move_to(r));
  auto live = state.live_bombs_in(me->location);
  if (!live.empty()) out.push_back(Action::inspect());
  for (Color c = 0; c < state.config.n_colors; ++c) {
    if (!me->has_tool(c)) continue;
    bool applicable = false;
    for (const Bomb* b : live) {
      if (state.config.apply_mode == ApplyMode::explosive) {
        applicable = true;  // any live bomb may be (mis)cut
      } else if (!b->remaining_sequence.empty() && b->remaining_sequence.front() == c) {
        applicable = true;
      }
      if (applicable) break;
    }
    if (applicable) out.push_back(Action::apply_tool(c));
  }
  return out;
}

inline std::pair<WorldState, ActionOutcome> apply_action(const WorldState& state,
                                                         const std::string& call_sign,
                                                         const Action& action) {
  if (state.agent(call_sign) == nullptr)
    throw std::invalid_argument("unknown agent " + call_sign);
  if (state.round > state.config.round_limit)
    throw std::logic_error("stepping a state past its round limit");

  WorldState next = state;
  AgentState* me = nullptr;
  for (auto& a : next.agents)
    if (a.call_sign == call_sign) me = &a;

  ActionOutcome out;
  out.agent = call_sign;
  out.action = action;
  out.error_context.current_room = me->location;

  auto fail = [&](ErrorKind kind) {
    out.ok = false;
    out.error = kind;
    out.effects.clear();
    out.score_delta = 0;
    return std::make_pair(state, out);  // rule errors leave the state untouched
  };

  // Lowest-id live bomb in the agent's room, preferring one whose remaining
  // head matches `want` when given.
  auto pick_bomb = [&](std::optional<Color> want) -> Bomb* {
    Bomb* fallback = nullptr;
    for (auto& b : next.bombs) {
      if (b.location != me->location || !b.live()) continue;
      if (want && !b.remaining_sequence.empty() && b.remaining_sequence.front() == *want)
        return &b;
      if (fallback == nullptr) fallback = &b;
    }
    return fallback;
  };

  switch (action.kind) {
    case Action::Kind::invalid:
      return fail(ErrorKind::unparseable);

    case Action::Kind::move: {
      out.error_context.target_room = action.room;
      if (!state.config.adjacent(me->location, action.room))
        return fail(ErrorKind::not_adjacent);
      me->location = action.room;
      Effect e;
      e.kind = Effect::Kind::moved_to;
      e.room = action.room;
      out.effects.push_back(std::move(e));
      out.ok = true;
      return {next, out};
    }

    case Action::Kind::inspect: {
      auto live = next.live_bombs_in(me->location);
      if (live.empty()) return fail(ErrorKind::no_bomb_to_inspect);
      for (const Bomb* b : live) {
        Effect e;
        e.kind = Effect::Kind::sequence_revealed;
        e.room = me->location;
        e.bomb_id = b->id;
        e.sequence = b->remaining_sequence;
        out.effects.push_back(std::move(e));
      }
      out.ok = true;
      return {next, out};
    }

    case Action::Kind::apply: {
      out.error_context.tool = action.color;
      if (!me->has_tool(action.color)) {
        if (const Bomb* b = pick_bomb(std::nullopt)) out.error_context.bomb_id = b->id;
        return fail(ErrorKind::missing_tool);
      }
      Bomb* target = pick_bomb(action.color);
      if (target == nullptr) return fail(ErrorKind::no_bomb_to_defuse);
      out.error_context.bomb_id = target->id;
      out.error_context.sequence = target->remaining_sequence;

      bool correct = !target->remaining_sequence.empty() &&
                     target->remaining_sequence.front() == action.color;
      if (!correct) {
        if (state.config.apply_mode == ApplyMode::guarded)
          return fail(ErrorKind::wrong_sequence);
        // Explosive mode: the bomb is permanently dead, zero points.
        target->state = BombState::exploded;
        target->remaining_sequence.clear();
        Effect e;
        e.kind = Effect::Kind::bomb_exploded;
        e.room = me->location;
        e.bomb_id = target->id;
        out.effects.push_back(std::move(e));
        out.ok = true;
        return {next, out};
      }

      target->remaining_sequence.erase(target->remaining_sequence.begin());
      Effect cut;
      cut.kind = Effect::Kind::phase_cut;
      cut.room = me->location;
      cut.bomb_id = target->id;
      cut.color = action.color;
      out.effects.push_back(std::move(cut));
      if (target->remaining_sequence.empty()) {
        target->state = BombState::defused;
        int points = kPointsPerPhase * static_cast<int>(target->full_sequence.size());
        next.score += points;
        out.score_delta = points;
        Effect done;
        done.kind = Effect::Kind::bomb_defused;
        done.room = me->location;
        done.bomb_id = target->id;
        done.points = points;
        out.effects.push_back(std::move(done));
      } else {
        target->state = BombState::partially_cut;
      }
      out.ok = true;
      return {next, out};
    }
  }
  return fail(ErrorKind::unparseable);
}

inline std::string fingerprint_turns(const std::vector<Turn>& turns) {
  std::ostringstream os;
  for (const auto& t : turns) os << t.agent << "=" << t.action.encode() << "|" << t.message << ";";
  return os.str();
}

// Buffers outgoing messages, records the round fingerprint and advances the
// round counter. Actions must already have been applied.
inline WorldState finish_round(const WorldState& state, const std::vector<Turn>& turns) {
  WorldState next = state;
  next.inbox = std::move(next.pending);
  next.inbox.clear();
  for (const auto& t : turns) {
    if (t.message.empty() && t.claims.empty()) continue;
    Message m;
    m.sender = t.agent;
    m.round_sent = state.round;
    m.text = t.message;
    m.claims = t.claims;
    next.pending.push_back(std::move(m));
  }
  // Deliver what was pending before this round completed.
  next.inbox = state.pending;
  next.pending.clear();
  for (const auto& t : turns) {
    if (t.message.empty() && t.claims.empty()) continue;
    Message m;
    m.sender = t.agent;
    m.round_sent = state.round;
    m.text = t.message;
    m.claims = t.claims;
    next.pending.push_back(std::move(m));
  }
  next.round_fingerprints.push_back(fingerprint_turns(turns));
  next.round += 1;
  return next;
}

inline std::pair<WorldState, RoundResult> step_round(const WorldState& state,
                                                     const std::vector<Turn>& turns) {
  if (turns.size() != state.agents.size())
    throw std::invalid_argument("step_round requires one turn per agent");
  for (size_t i = 0; i < turns.size(); ++i) {
    if (turns[i].agent != state.agents[i].call_sign)
      throw std::invalid_argument("turns must follow the configured call-sign order");
  }
  WorldState cur = state;
  RoundResult result;
  for (const auto& t : turns) {
    auto [next, outcome] = apply_action(cur, t.agent, t.action);
    cur = std::move(next);
    result.outcomes.push_back(std::move(outcome));
  }
  cur = finish_round(cur, turns);
  result.sent = cur.pending;
  return {cur, result};
}

inline Termination check_termination(const WorldState& state) {
  if (state.all_bombs_resolved()) return Termination::all_defused;
  if (state.round > state.config.round_limit) return Termination::time_limit;
  int window = state.config.deadlock_window;
  if (static_cast<int>(state.round_fingerprints.size()) >= window && window >= 1) {
    bool same = true;
    size_t n = state.round_fingerprints.size();
    for (int i = 1; i < window; ++i) {
      if (state.round_fingerprints[n - 1 - i] != state.round_fingerprints[n - 1]) {
        same = false;
        break;
      }
    }
    // A window of identical rounds only counts once agents had a chance to repeat.
    if (same && window >= 2) return Termination::deadlock;
  }
  return Termination::running;
}

// BFS hop distances from `from` to every room; unreachable rooms are absent.
inline std::map<RoomId, int> bfs_distances(const WorldConfig& config, RoomId from) {
  std::map<RoomId, int> dist;
  dist[from] = 0;
  std::vector<RoomId> frontier{from};
  while (!frontier.empty()) {
    std::vector<RoomId> next_frontier;
    for (RoomId r : frontier) {
      for (RoomId n : config.neighbors(r)) {
        if (dist.count(n)) continue;
        dist[n] = dist[r] + 1;
        next_frontier.push_back(n);
      }
    }
    frontier = std::move(next_frontier);
  }
  return dist;
}

// First hop of a shortest path from->to; nullopt when from==to or unreachable.
inline std::optional<RoomId> first_step_towards(const WorldConfig& config, RoomId from,
                                                RoomId to) {
  if (from == to) return std::nullopt;
  auto dist = bfs_distances(config, to);
  if (!dist.count(from)) return std::nullopt;
  std::optional<RoomId> best;
  for (RoomId n : config.neighbors(from)) {
    auto it = dist.find(n);
    if (it == dist.end()) continue;
    if (it->second == dist[from] - 1 && (!best || n < *best)) best = n;
  }
  return best;
}

}  // namespace defuse
