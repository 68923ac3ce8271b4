#include "semgraph/matcher.hpp"

#include <algorithm>
#include <regex>
#include <set>

namespace semgraph {

namespace {

using query::PatternBlock;

struct Clause {
  enum class Kind { Present, Eq, Neq, Regex };
  Kind kind;
  std::string name;
  std::string value;
  std::shared_ptr<const std::regex> re;

  bool holds(const FeatureStructure& fs) const {
    auto v = fs.get(name);
    switch (kind) {
      case Kind::Present: return v.has_value();
      case Kind::Eq: return v && *v == value;
      case Kind::Neq: return !v || *v != value;
      case Kind::Regex: return v && std::regex_match(v->begin(), v->end(), *re);
    }
    return false;
  }

  int selectivity() const {
    switch (kind) {
      case Kind::Eq: return 8;
      case Kind::Regex: return 4;
      case Kind::Present: return 2;
      case Kind::Neq: return 1;
    }
    return 0;
  }
};

Clause compile_clause(const query::Clause& c) {
  return std::visit(
      [](const auto& x) -> Clause {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, query::FeaturePresent>) return {Clause::Kind::Present, x.name, {}, nullptr};
        else if constexpr (std::is_same_v<T, query::FeatureEq>) return {Clause::Kind::Eq, x.name, x.value, nullptr};
        else if constexpr (std::is_same_v<T, query::FeatureNeq>) return {Clause::Kind::Neq, x.name, x.value, nullptr};
        else
          return {Clause::Kind::Regex, x.name, x.pattern,
                  std::make_shared<const std::regex>(x.pattern, std::regex::ECMAScript | std::regex::optimize)};
      },
      c);
}

struct PatNode {
  std::string ident;  // empty for wildcards
  std::vector<Clause> clauses;
  int preset = -1;  // position in the outer (base) named node list

  int selectivity() const {
    int s = 0;
    for (const auto& c : clauses) s += c.selectivity();
    return s;
  }
};

struct PatEdge {
  std::string ident;  // empty when anonymous
  int source = 0;
  int target = 0;
  std::vector<std::string> labels;

  bool accepts(const Edge& e) const {
    if (labels.empty()) return true;
    auto l = e.label_text();
    return std::find(labels.begin(), labels.end(), l) != labels.end();
  }
};

struct PatRel {
  int left = 0;
  std::string left_feature;
  bool equal = true;
  int right = 0;
  std::string right_feature;
};

struct Plan {
  std::vector<int> order;                    // node per step
  std::vector<int> anchor;                   // pattern edge tying the step's node to an earlier one, or -1
  std::vector<std::vector<int>> closing;     // edges whose endpoints are both placed at this step
  std::vector<std::vector<int>> relations;   // relations decidable at this step
  std::size_t named_complete = 0;            // first step at which all named elements are placed
};

/// A compiled pattern block. Node 0..k-1 follow node_idents() order, then
/// one node per wildcard.
struct Pattern {
  std::vector<PatNode> nodes;
  std::vector<PatEdge> edges;
  std::vector<PatRel> relations;
  std::vector<int> named_nodes;
  std::vector<int> named_edges;
  std::vector<Plan> plans;  // plans[0]: no hint; plans[i + 1]: start from node i

  const Plan& plan(int hint) const { return plans[static_cast<std::size_t>(hint + 1)]; }
};

Plan make_plan(const Pattern& p, int hint) {
  Plan plan;
  const std::size_t n = p.nodes.size();
  std::vector<char> placed(n, 0);
  std::vector<char> edge_closed(p.edges.size(), 0);
  std::vector<char> rel_done(p.relations.size(), 0);

  auto place = [&](int node, int anchor) {
    placed[static_cast<std::size_t>(node)] = 1;
    plan.order.push_back(node);
    plan.anchor.push_back(anchor);
    std::vector<int> closing;
    for (std::size_t e = 0; e < p.edges.size(); ++e) {
      if (edge_closed[e]) continue;
      if (placed[static_cast<std::size_t>(p.edges[e].source)] && placed[static_cast<std::size_t>(p.edges[e].target)]) {
        edge_closed[e] = 1;
        closing.push_back(static_cast<int>(e));
      }
    }
    // Label-restricted edges first: they prune more.
    std::stable_sort(closing.begin(), closing.end(),
                     [&](int a, int b) { return !p.edges[a].labels.empty() && p.edges[b].labels.empty(); });
    plan.closing.push_back(std::move(closing));
    std::vector<int> rels;
    for (std::size_t r = 0; r < p.relations.size(); ++r) {
      if (rel_done[r]) continue;
      if (placed[static_cast<std::size_t>(p.relations[r].left)] && placed[static_cast<std::size_t>(p.relations[r].right)]) {
        rel_done[r] = 1;
        rels.push_back(static_cast<int>(r));
      }
    }
    plan.relations.push_back(std::move(rels));
  };

  for (std::size_t i = 0; i < n; ++i)
    if (p.nodes[i].preset >= 0) place(static_cast<int>(i), -1);
  if (hint >= 0 && !placed[static_cast<std::size_t>(hint)]) place(hint, -1);

  while (plan.order.size() < n) {
    int best = -1;
    int best_anchor = -1;
    int best_score = -1;
    for (std::size_t i = 0; i < n; ++i) {
      if (placed[i]) continue;
      int anchor = -1;
      for (std::size_t e = 0; e < p.edges.size(); ++e) {
        const auto& pe = p.edges[e];
        bool touches = (pe.source == static_cast<int>(i) && pe.target != static_cast<int>(i) && placed[static_cast<std::size_t>(pe.target)]) ||
                       (pe.target == static_cast<int>(i) && pe.source != static_cast<int>(i) && placed[static_cast<std::size_t>(pe.source)]);
        if (!touches) continue;
        if (anchor < 0 || (p.edges[static_cast<std::size_t>(anchor)].labels.empty() && !pe.labels.empty()))
          anchor = static_cast<int>(e);
      }
      int score = p.nodes[i].selectivity() + (anchor >= 0 ? 1000 : 0);
      if (score > best_score) {
        best = static_cast<int>(i);
        best_anchor = anchor;
        best_score = score;
      }
    }
    place(best, best_anchor);
  }

  // First step after which every named node and edge is bound.
  std::set<int> named_nodes(p.named_nodes.begin(), p.named_nodes.end());
  std::set<int> named_edges(p.named_edges.begin(), p.named_edges.end());
  plan.named_complete = 0;
  for (std::size_t s = 0; s < plan.order.size() && (!named_nodes.empty() || !named_edges.empty()); ++s) {
    named_nodes.erase(plan.order[s]);
    for (int e : plan.closing[s]) named_edges.erase(e);
    plan.named_complete = s + 1;
  }
  return plan;
}

/// `outer` lists the base pattern's named node identifiers; block identifiers
/// found there become preset nodes.
Pattern compile(const PatternBlock& block, const std::vector<std::string>& outer) {
  Pattern p;
  std::vector<std::string> idents = block.node_idents();
  for (const auto& r : block.relations)
    for (const auto* id : {&r.left_ident, &r.right_ident})
      if (std::find(idents.begin(), idents.end(), *id) == idents.end()) idents.push_back(*id);

  auto index_of = [&](const std::string& id) {
    return static_cast<int>(std::find(idents.begin(), idents.end(), id) - idents.begin());
  };

  for (const auto& id : idents) {
    PatNode node;
    node.ident = id;
    for (const auto& nc : block.nodes)
      if (nc.ident == id)
        for (const auto& c : nc.clauses) node.clauses.push_back(compile_clause(c));
    auto it = std::find(outer.begin(), outer.end(), id);
    if (it != outer.end()) node.preset = static_cast<int>(it - outer.begin());
    else p.named_nodes.push_back(static_cast<int>(p.nodes.size()));
    p.nodes.push_back(std::move(node));
  }

  auto ref = [&](const query::NodeRef& r) {
    if (!r.wildcard()) return index_of(r.ident);
    p.nodes.push_back(PatNode{});
    return static_cast<int>(p.nodes.size() - 1);
  };

  for (const auto& ec : block.edges) {
    PatEdge e;
    e.ident = ec.ident.value_or("");
    e.source = ref(ec.source);
    e.target = ref(ec.target);
    e.labels = ec.labels;
    if (!e.ident.empty()) p.named_edges.push_back(static_cast<int>(p.edges.size()));
    p.edges.push_back(std::move(e));
  }

  for (const auto& r : block.relations)
    p.relations.push_back({index_of(r.left_ident), r.left_feature, r.equal, index_of(r.right_ident), r.right_feature});

  p.plans.push_back(make_plan(p, -1));
  for (std::size_t i = 0; i < p.nodes.size(); ++i) p.plans.push_back(make_plan(p, static_cast<int>(i)));
  return p;
}

constexpr std::uint32_t kUnbound = UINT32_MAX;

/// Bound images of base named elements handed to a nested search.
struct Binding {
  std::vector<NodeId> nodes;  // base named node order
  std::vector<EdgeId> edges;  // base named edge order
};

class Search {
 public:
  Search(const Pattern& pattern, const Plan& plan, const SemGraph& g, const MatchOptions& opts)
      : p_(pattern),
        plan_(plan),
        g_(g),
        opts_(opts),
        node_img_(pattern.nodes.size(), NodeId{kUnbound}),
        edge_img_(pattern.edges.size(), EdgeId{kUnbound}),
        node_used_(g.node_count(), 0),
        edge_used_(g.edge_count(), 0) {
    while (first_free_ < plan_.order.size() && p_.nodes[static_cast<std::size_t>(plan_.order[first_free_])].preset >= 0)
      ++first_free_;
  }

  /// Makes the base images unavailable to fresh nodes/edges and binds presets.
  void bind(const Binding& b) {
    preset_ = &b;
    for (NodeId n : b.nodes) node_used_[n.index] = 1;
    for (EdgeId e : b.edges) edge_used_[e.index] = 1;
  }

  /// Candidate images for the first non-preset node of the plan.
  void restrict_start(std::span<const NodeId> candidates) { restricted_ = candidates; }

  /// True iff some complete assignment exists.
  bool exists() {
    collecting_ = false;
    return step(0);
  }

  /// Reports each distinct image of the named elements once.
  void collect(std::function<void(const Search&)> report) {
    report_ = std::move(report);
    collecting_ = true;
    step(0);
  }

  NodeId node(int i) const { return node_img_[static_cast<std::size_t>(i)]; }
  EdgeId edge(int i) const { return edge_img_[static_cast<std::size_t>(i)]; }

 private:
  void tick() {
    if (!opts_.deadline) return;
    if ((++ticks_ & 0x3ff) == 0 && std::chrono::steady_clock::now() > *opts_.deadline) throw BudgetExceeded();
  }

  bool relations_hold(std::size_t s) const {
    for (int r : plan_.relations[s]) {
      const PatRel& rel = p_.relations[static_cast<std::size_t>(r)];
      auto l = g_.features(node(rel.left)).get(rel.left_feature);
      auto rv = g_.features(node(rel.right)).get(rel.right_feature);
      if (!l || !rv) return false;
      if ((*l == *rv) != rel.equal) return false;
    }
    return true;
  }

  /// Returns true to stop the whole search (exists mode found a witness).
  bool step(std::size_t s) {
    tick();
    if (collecting_ && s == plan_.named_complete) {
      // All named elements bound: the rest only has to exist once.
      std::vector<std::uint32_t> key;
      for (int n : p_.named_nodes) key.push_back(node(n).index);
      key.push_back(kUnbound);
      for (int e : p_.named_edges) key.push_back(edge(e).index);
      if (seen_.contains(key)) return false;
      collecting_ = false;
      bool found = step(s);
      collecting_ = true;
      if (found) {
        seen_.insert(std::move(key));
        report_(*this);
      }
      return false;
    }
    if (s == plan_.order.size()) return true;

    const int pn = plan_.order[s];
    const PatNode& pnode = p_.nodes[static_cast<std::size_t>(pn)];

    auto try_candidate = [&](NodeId c) -> bool {
      const auto& fs = g_.features(c);
      for (const auto& cl : pnode.clauses)
        if (!cl.holds(fs)) return false;
      node_img_[static_cast<std::size_t>(pn)] = c;
      bool fresh = pnode.preset < 0;
      if (fresh) node_used_[c.index] = 1;
      bool stop = relations_hold(s) && edges(s, 0);
      if (fresh) node_used_[c.index] = 0;
      node_img_[static_cast<std::size_t>(pn)] = NodeId{kUnbound};
      return stop;
    };

    if (pnode.preset >= 0) return try_candidate(preset_->nodes[static_cast<std::size_t>(pnode.preset)]);

    const int anchor = plan_.anchor[s];
    if (anchor >= 0) {
      const PatEdge& pe = p_.edges[static_cast<std::size_t>(anchor)];
      bool outgoing = pe.target == pn;  // the placed endpoint is the source
      NodeId from = node(outgoing ? pe.source : pe.target);
      auto adj = outgoing ? g_.successors(from) : g_.predecessors(from);
      std::vector<NodeId> candidates;
      candidates.reserve(adj.size());
      for (const auto& a : adj)
        if (pe.accepts(g_.edge(a.edge))) candidates.push_back(a.node);
      std::sort(candidates.begin(), candidates.end());
      candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
      for (NodeId c : candidates)
        if (!node_used_[c.index] && try_candidate(c)) return true;
      return false;
    }
    if (s == first_free_ && restricted_) {
      for (NodeId c : *restricted_)
        if (!node_used_[c.index] && try_candidate(c)) return true;
      return false;
    }
    for (std::uint32_t i = 0; i < g_.node_count(); ++i)
      if (!node_used_[i] && try_candidate(NodeId{i})) return true;
    return false;
  }

  bool edges(std::size_t s, std::size_t k) {
    const auto& closing = plan_.closing[s];
    if (k == closing.size()) return step(s + 1);
    const int pe_index = closing[k];
    const PatEdge& pe = p_.edges[static_cast<std::size_t>(pe_index)];
    NodeId src = node(pe.source);
    NodeId tgt = node(pe.target);
    for (const auto& a : g_.successors(src)) {
      if (a.node != tgt || edge_used_[a.edge.index] || !pe.accepts(g_.edge(a.edge))) continue;
      edge_img_[static_cast<std::size_t>(pe_index)] = a.edge;
      edge_used_[a.edge.index] = 1;
      bool stop = edges(s, k + 1);
      edge_used_[a.edge.index] = 0;
      edge_img_[static_cast<std::size_t>(pe_index)] = EdgeId{kUnbound};
      if (stop) return true;
    }
    return false;
  }

  const Pattern& p_;
  const Plan& plan_;
  const SemGraph& g_;
  const MatchOptions& opts_;
  std::vector<NodeId> node_img_;
  std::vector<EdgeId> edge_img_;
  std::vector<char> node_used_;
  std::vector<char> edge_used_;
  const Binding* preset_ = nullptr;
  std::optional<std::span<const NodeId>> restricted_;
  std::size_t first_free_ = 0;
  bool collecting_ = false;
  std::set<std::vector<std::uint32_t>> seen_;
  std::function<void(const Search&)> report_;
  std::uint64_t ticks_ = 0;
};

bool globals_hold(const std::vector<query::GlobalConstraint>& globals, const SemGraph& g) {
  if (globals.empty()) return true;
  bool cyclic = g.is_cyclic();
  for (auto c : globals) {
    if (c == query::GlobalConstraint::IsCyclic && !cyclic) return false;
    if (c == query::GlobalConstraint::IsAcyclic && cyclic) return false;
  }
  return true;
}

}  // namespace

struct Matcher::Impl {
  query::Request request;
  Pattern base;
  std::vector<std::string> base_node_idents;  // named, base order
  std::vector<std::string> base_edge_idents;
  std::vector<Pattern> withouts;

  explicit Impl(const query::Request& req) : request(req), base(compile(req.base, {})) {
    for (int n : base.named_nodes) base_node_idents.push_back(base.nodes[static_cast<std::size_t>(n)].ident);
    for (int e : base.named_edges) base_edge_idents.push_back(base.edges[static_cast<std::size_t>(e)].ident);
    for (const auto& w : req.withouts) withouts.push_back(compile(w, base_node_idents));
  }

  Binding binding_of(const Occurrence& occ) const {
    Binding b;
    for (const auto& id : base_node_idents) b.nodes.push_back(occ.nodes.at(id));
    for (const auto& id : base_edge_idents) b.edges.push_back(occ.edges.at(id));
    return b;
  }

  bool extends(const Pattern& block, const SemGraph& g, const Binding& b, const MatchOptions& opts) const {
    Search search(block, block.plan(-1), g, opts);
    search.bind(b);
    return search.exists();
  }

  /// `hint`/`restricted`: base node to start from and its candidate nodes.
  std::vector<Occurrence> match(const SemGraph& g, const MatchOptions& opts, int hint,
                                std::span<const NodeId> restricted) const {
    std::vector<Occurrence> out;
    if (!globals_hold(request.globals, g)) return out;

    Binding none;
    Search search(base, base.plan(hint), g, opts);
    search.bind(none);
    if (hint >= 0) search.restrict_start(restricted);
    search.collect([&](const Search& s) {
      Occurrence occ;
      occ.sent_id = g.sent_id();
      for (std::size_t i = 0; i < base.named_nodes.size(); ++i)
        occ.nodes.emplace(base_node_idents[i], s.node(base.named_nodes[i]));
      for (std::size_t i = 0; i < base.named_edges.size(); ++i)
        occ.edges.emplace(base_edge_idents[i], s.edge(base.named_edges[i]));
      out.push_back(std::move(occ));
    });

    if (!withouts.empty()) {
      std::erase_if(out, [&](const Occurrence& occ) {
        Binding b = binding_of(occ);
        for (const auto& w : withouts)
          if (extends(w, g, b, opts)) return true;
        return false;
      });
    }
    std::sort(out.begin(), out.end(), [](const Occurrence& a, const Occurrence& b) {
      return std::tie(a.nodes, a.edges) < std::tie(b.nodes, b.edges);
    });
    return out;
  }
};

Highlight highlight_of(const Occurrence& occ) {
  Highlight h;
  for (const auto& [_, n] : occ.nodes) h.nodes.insert(n);
  for (const auto& [_, e] : occ.edges) h.edges.insert(e);
  return h;
}

Matcher::Matcher(const query::Request& req) : impl_(std::make_unique<Impl>(req)) {}
Matcher::~Matcher() = default;
Matcher::Matcher(Matcher&&) noexcept = default;
Matcher& Matcher::operator=(Matcher&&) noexcept = default;

const query::Request& Matcher::request() const { return impl_->request; }

std::vector<Occurrence> Matcher::match(const SemGraph& g, const MatchOptions& opts) const {
  return impl_->match(g, opts, -1, {});
}

void Matcher::for_each(const Corpus& corpus, const FeatureIndex* index, const MatchOptions& opts,
                       const std::function<void(Occurrence&&)>& visit) const {
  auto emit = [&](std::size_t gi, std::vector<Occurrence> occs) {
    for (auto& occ : occs) {
      occ.corpus_id = corpus.id();
      occ.graph_index = gi;
      visit(std::move(occ));
    }
  };

  // Most selective indexed equality constraint of a base node.
  int hint = -1;
  std::span<const Posting> postings;
  if (index) {
    const Pattern& base = impl_->base;
    for (std::size_t i = 0; i < base.nodes.size(); ++i) {
      for (const auto& c : base.nodes[i].clauses) {
        if (c.kind != Clause::Kind::Eq) continue;
        auto list = index->postings(c.name, c.value);
        if (hint < 0 || list.size() < postings.size()) {
          hint = static_cast<int>(i);
          postings = list;
        }
      }
    }
  }

  if (hint < 0) {
    for (std::size_t gi = 0; gi < corpus.size(); ++gi) emit(gi, impl_->match(corpus[gi], opts, -1, {}));
    return;
  }
  std::vector<NodeId> candidates;
  for (std::size_t i = 0; i < postings.size();) {
    std::size_t gi = postings[i].graph;
    candidates.clear();
    for (; i < postings.size() && postings[i].graph == gi; ++i) candidates.push_back(postings[i].node);
    if (gi >= corpus.size()) continue;
    emit(gi, impl_->match(corpus[gi], opts, hint, candidates));
  }
}

std::vector<Occurrence> match_graph(const query::Request& req, const SemGraph& g, const MatchOptions& opts) {
  return Matcher(req).match(g, opts);
}

std::vector<Occurrence> match_corpus(const query::Request& req, const Corpus& corpus, const FeatureIndex* index,
                                     const MatchOptions& opts) {
  std::vector<Occurrence> out;
  Matcher(req).for_each(corpus, index, opts, [&](Occurrence&& occ) { out.push_back(std::move(occ)); });
  return out;
}

std::size_t ClusterTable::total() const {
  std::size_t n = 0;
  for (const auto& [_, c] : rows) n += c;
  return n;
}

std::vector<ClusterRow> ClusterTable::sorted() const {
  std::vector<ClusterRow> out;
  for (const auto& [v, c] : rows) out.push_back({v, c});
  std::stable_sort(out.begin(), out.end(), [](const ClusterRow& a, const ClusterRow& b) { return a.count > b.count; });
  return out;
}

struct ClusterEvaluator::Compiled {
  Pattern pattern;
};

ClusterEvaluator::ClusterEvaluator(const Matcher& matcher, query::ClusterKey key)
    : matcher_(&matcher), key_(std::move(key)) {
  if (key_.kind == query::ClusterKey::Kind::Whether)
    whether_ = std::make_unique<Compiled>(Compiled{compile(key_.whether, matcher.impl_->base_node_idents)});
}

ClusterEvaluator::~ClusterEvaluator() = default;
ClusterEvaluator::ClusterEvaluator(ClusterEvaluator&&) noexcept = default;

std::string ClusterEvaluator::value(const SemGraph& g, const Occurrence& occ, const MatchOptions& opts) const {
  switch (key_.kind) {
    case query::ClusterKey::Kind::NodeFeature: {
      auto it = occ.nodes.find(key_.ident);
      if (it == occ.nodes.end()) return kUndefinedCluster;
      auto v = g.features(it->second).get(key_.feature);
      return v ? std::string(*v) : std::string(kUndefinedCluster);
    }
    case query::ClusterKey::Kind::EdgeLabel: {
      auto it = occ.edges.find(key_.ident);
      if (it == occ.edges.end()) return kUndefinedCluster;
      return std::string(g.edge(it->second).label_text());
    }
    case query::ClusterKey::Kind::Whether: {
      const auto& impl = *matcher_->impl_;
      return impl.extends(whether_->pattern, g, impl.binding_of(occ), opts) ? "yes" : "no";
    }
  }
  return kUndefinedCluster;
}

ClusterTable cluster(const query::Request& req, const query::ClusterKey& key, const Corpus& corpus,
                     const FeatureIndex* index, const MatchOptions& opts) {
  Matcher matcher(req);
  ClusterEvaluator eval(matcher, key);
  ClusterTable table{key, {}};
  if (key.kind == query::ClusterKey::Kind::Whether) {
    table.rows["yes"] = 0;
    table.rows["no"] = 0;
  }
  matcher.for_each(corpus, index, opts, [&](Occurrence&& occ) {
    ++table.rows[eval.value(corpus[occ.graph_index], occ, opts)];
  });
  return table;
}

CorpusRatio corpus_ratio(const query::Request& req, const Corpus& corpus, const FeatureIndex* index,
                         const MatchOptions& opts) {
  CorpusRatio r;
  r.total = corpus.size();
  std::set<std::size_t> graphs;
  Matcher(req).for_each(corpus, index, opts, [&](Occurrence&& occ) { graphs.insert(occ.graph_index); });
  r.matching = graphs.size();
  r.ratio = r.total == 0 ? 0.0 : static_cast<double>(r.matching) / static_cast<double>(r.total);
  return r;
}

}  // namespace semgraph
