#include "specmc/explorer.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace specmc {

namespace {

// Traces are built as shared suffix-chains so BFS nodes stay cheap.
struct TraceNode {
  TraceStep step;
  std::shared_ptr<const TraceNode> prev;
  std::size_t len;
  std::size_t hash;
};
using TracePtr = std::shared_ptr<const TraceNode>;

TracePtr trace_cons(const TracePtr& prev, TraceStep step) {
  auto n = std::make_shared<TraceNode>();
  n->prev = prev;
  n->len = (prev ? prev->len : 0) + 1;
  n->hash = hash_combine(prev ? prev->hash : 99,
                         hash_combine(static_cast<std::size_t>(step.pid),
                                      step.act.hash));
  n->step = std::move(step);
  return n;
}

Trace materialize(const TracePtr& t) {
  Trace out;
  for (const TraceNode* n = t.get(); n != nullptr; n = n->prev.get()) {
    out.push_back(n->step);
  }
  std::reverse(out.begin(), out.end());
  return out;
}

bool trace_equal(const TracePtr& a, const TracePtr& b) {
  const TraceNode* x = a.get();
  const TraceNode* y = b.get();
  if ((x ? x->len : 0) != (y ? y->len : 0)) return false;
  while (x != nullptr) {
    if (x == y) return true;
    if (x->step.pid != y->step.pid || !action_equal(x->step.act, y->step.act))
      return false;
    x = x->prev.get();
    y = y->prev.get();
  }
  return true;
}

struct Node {
  Configuration cfg;
  TracePtr trace;
  int depth = 0;
  std::size_t key_hash = 0;
};

struct NodeHash {
  std::size_t operator()(const Node& n) const { return n.key_hash; }
};
struct NodeEq {
  bool operator()(const Node& a, const Node& b) const {
    return a.key_hash == b.key_hash && trace_equal(a.trace, b.trace) &&
           a.cfg == b.cfg;
  }
};

Node make_node(Configuration cfg, TracePtr trace, int depth) {
  Node n{std::move(cfg), std::move(trace), depth, 0};
  n.key_hash = hash_combine(n.cfg.hash(), n.trace ? n.trace->hash : 99);
  return n;
}

std::string finals_key(const RunResult& r) {
  std::ostringstream out;
  for (Value v : r.finals.data) out << v << ",";
  out << "|";
  for (Addr a : r.finals.cache) out << a << ",";
  out << "|";
  for (const auto& regs : r.regs) {
    for (const auto& [k, v] : regs) out << k << "=" << v << ",";
    out << ";";
  }
  return out.str();
}

// Level-synchronous BFS over (configuration, visible trace) pairs.  When
// `stop` is set, returns early with the first terminated run (in canonical
// order) that satisfies it.
struct BfsOutput {
  std::map<std::string, RunResult> runs;  // canonical key -> run
  ExhaustFlags flags;
  std::optional<RunResult> hit;
};

RunResult to_run(const Node& n) {
  RunResult r;
  r.trace = materialize(n.trace);
  r.finals = n.cfg.mem;
  for (const auto& p : n.cfg.procs) r.regs.push_back(p.regs);
  return r;
}

BfsOutput bfs(const Program& prog, const ExploreOptions& opts,
              const std::function<bool(const RunResult&)>* stop) {
  BfsOutput out;
  StepContext ctx{&prog.amap, opts.model,          opts.mode,
                  opts.locals_policy, opts.bounds, prog.value_bits};

  std::unordered_set<Node, NodeHash, NodeEq> visited;
  std::vector<Node> level;
  level.push_back(make_node(initial_configuration(prog), nullptr, 0));
  visited.insert(level.front());

  const int jobs = std::max(1, opts.jobs);

  while (!level.empty()) {
    // Expand the whole level first; step() is pure so this can fan out.
    std::vector<std::vector<Successor>> expanded(level.size());
    std::vector<ExhaustFlags> worker_flags(
        static_cast<std::size_t>(jobs));
    auto expand_range = [&](std::size_t lo, std::size_t hi, int worker) {
      for (std::size_t i = lo; i < hi; ++i) {
        const Node& n = level[i];
        if (terminated(n.cfg) || n.depth >= opts.bounds.max_depth) continue;
        expanded[i] = step(n.cfg, ctx, &worker_flags[worker]);
      }
    };
    if (jobs == 1 || level.size() < 2) {
      expand_range(0, level.size(), 0);
    } else {
      std::vector<std::thread> threads;
      std::size_t chunk = (level.size() + jobs - 1) / jobs;
      for (int w = 0; w < jobs; ++w) {
        std::size_t lo = std::min(level.size(), w * chunk);
        std::size_t hi = std::min(level.size(), lo + chunk);
        if (lo < hi) threads.emplace_back(expand_range, lo, hi, w);
      }
      for (auto& t : threads) t.join();
    }
    for (const auto& f : worker_flags) {
      out.flags.depth |= f.depth;
      out.flags.loop |= f.loop;
      out.flags.spec_depth |= f.spec_depth;
      out.flags.states |= f.states;
    }

    // Merge serially, in level order, so results are independent of jobs.
    std::vector<Node> next;
    for (std::size_t i = 0; i < level.size(); ++i) {
      const Node& n = level[i];
      if (terminated(n.cfg)) {
        RunResult run = to_run(n);
        std::string key = trace_key(run.trace) + "#" + finals_key(run);
        if (stop != nullptr && (*stop)(run)) {
          out.hit = std::move(run);
          return out;
        }
        out.runs.emplace(std::move(key), std::move(run));
        continue;
      }
      if (n.depth >= opts.bounds.max_depth) {
        out.flags.depth = true;
        continue;
      }
      for (auto& s : expanded[i]) {
        TracePtr t =
            s.label.silent() ? n.trace : trace_cons(n.trace, {s.label.pid,
                                                              s.label.act});
        Node succ = make_node(std::move(s.cfg), std::move(t), n.depth + 1);
        if (visited.size() >= opts.bounds.max_states) {
          out.flags.states = true;
          return out;
        }
        if (visited.insert(succ).second) {
          next.push_back(std::move(succ));
        }
      }
    }
    level = std::move(next);
  }
  return out;
}

}  // namespace

std::string trace_key(const Trace& t) {
  std::ostringstream out;
  for (const auto& s : t) {
    out << s.pid << ":" << to_string(s.act) << "\n";
  }
  return out.str();
}

std::string to_string(const TraceStep& step, const Program& prog) {
  const std::string& name =
      step.pid >= 0 && step.pid < static_cast<int>(prog.procs.size())
          ? prog.procs[step.pid].name
          : "P?";
  return name + ": " + to_string(step.act);
}

ExploreResult explore(const Program& prog, const ExploreOptions& opts) {
  BfsOutput out = bfs(prog, opts, nullptr);
  ExploreResult res;
  res.flags = out.flags;
  res.runs.reserve(out.runs.size());
  for (auto& [key, run] : out.runs) res.runs.push_back(std::move(run));
  return res;
}

Verdict refines(const Program& abstract, const Program& concrete,
                const ExploreOptions& opts) {
  ExploreResult abs = explore(abstract, opts);
  ExploreResult conc = explore(concrete, opts);
  if (abs.flags.any() || conc.flags.any()) {
    Verdict v;
    v.kind = Verdict::Kind::BoundExhausted;
    v.detail = "exploration hit a bound; refinement undecided";
    return v;
  }
  std::unordered_set<std::string> abstract_traces;
  for (const auto& r : abs.runs) abstract_traces.insert(trace_key(r.trace));
  for (const auto& r : conc.runs) {
    if (!abstract_traces.count(trace_key(r.trace))) {
      Verdict v;
      v.kind = Verdict::Kind::Fails;
      v.witness = r;
      v.detail = "concrete trace not admitted by the abstract system";
      return v;
    }
  }
  return Verdict{};
}

Verdict check_reach(const Program& prog, const ExprPtr& predicate,
                    const ExploreOptions& opts) {
  std::function<bool(const RunResult&)> pred = [&](const RunResult& run) {
    return eval_final(predicate, prog, run.finals, run.regs) != 0;
  };
  BfsOutput out = bfs(prog, opts, &pred);
  if (out.hit) {
    Verdict v;
    v.kind = Verdict::Kind::Fails;
    v.witness = std::move(out.hit);
    v.detail = "reachable: predicate holds in a terminating run";
    return v;
  }
  if (out.flags.any()) {
    Verdict v;
    v.kind = Verdict::Kind::BoundExhausted;
    v.detail = "no witness within bounds; result is a lower approximation";
    return v;
  }
  return Verdict{};
}

bool replay(const Program& prog, const Trace& trace,
            const ExploreOptions& opts) {
  StepContext ctx{&prog.amap, opts.model,          opts.mode,
                  opts.locals_policy, opts.bounds, prog.value_bits};
  struct RNode {
    Configuration cfg;
    std::size_t pos;
    int depth;
  };
  struct RHash {
    std::size_t operator()(const std::pair<std::size_t, std::size_t>& k) const {
      return hash_combine(k.first, k.second);
    }
  };
  std::deque<RNode> queue;
  std::unordered_set<std::pair<std::size_t, std::size_t>, RHash> seen;
  auto push = [&](Configuration cfg, std::size_t pos, int depth) {
    auto key = std::make_pair(cfg.hash(), pos);
    if (seen.insert(key).second) {
      queue.push_back(RNode{std::move(cfg), pos, depth});
    }
  };
  push(initial_configuration(prog), 0, 0);
  while (!queue.empty()) {
    RNode n = std::move(queue.front());
    queue.pop_front();
    if (terminated(n.cfg)) {
      if (n.pos == trace.size()) return true;
      continue;
    }
    if (n.depth >= opts.bounds.max_depth) continue;
    for (auto& s : step(n.cfg, ctx, nullptr)) {
      if (s.label.silent()) {
        push(std::move(s.cfg), n.pos, n.depth + 1);
      } else if (n.pos < trace.size() && s.label.pid == trace[n.pos].pid &&
                 action_equal(s.label.act, trace[n.pos].act)) {
        push(std::move(s.cfg), n.pos + 1, n.depth + 1);
      }
    }
  }
  return false;
}

Value eval_final(const ExprPtr& e, const Program& prog,
                 const MemoryImage& finals, const std::vector<RegMap>& regs) {
  RegMap combined;
  std::map<std::string, int> bare_count;
  for (std::size_t i = 0; i < prog.procs.size() && i < regs.size(); ++i) {
    for (const auto& [r, v] : regs[i]) {
      combined[prog.procs[i].name + "." + r] = v;
      bare_count[r] += 1;
    }
  }
  for (std::size_t i = 0; i < prog.procs.size() && i < regs.size(); ++i) {
    for (const auto& [r, v] : regs[i]) {
      if (bare_count[r] == 1 && !prog.amap.is_global(r)) combined[r] = v;
    }
  }
  return eval(e, combined, finals, prog.amap, prog.value_bits);
}

}  // namespace specmc
