#include <map>
#include <sstream>

#include "pmx/automaton.hpp"
#include "pmx/printer.hpp"

namespace pmx {

std::string format_occurrence(const Occurrence& occ) {
  std::string out = "r" + std::to_string(occ.root);
  for (const OccStep& step : occ.steps) {
    switch (step.kind) {
      case OccStep::Kind::Head: out += ".hd"; break;
      case OccStep::Kind::Tail: out += ".tl"; break;
      case OccStep::Kind::Field:
        out += ".fld(" + step.tag->name + "," +
               std::to_string(step.field_index) + ")";
        break;
    }
  }
  return out;
}

namespace {

struct NodeRef {
  const Automaton* automaton;
  int index;
  bool operator<(const NodeRef& other) const {
    if (automaton != other.automaton) return automaton < other.automaton;
    return index < other.index;
  }
};

/// Assigns dump ids by preorder traversal: tests visit pass then fail,
/// sequence loops visit body, next, fail. This keeps ids independent of
/// node creation order.
struct Dumper {
  std::map<NodeRef, int> ids;
  std::vector<NodeRef> order;

  int id_of(NodeRef ref) {
    auto it = ids.find(ref);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(order.size());
    ids.emplace(ref, id);
    order.push_back(ref);
    const AutomatonNode& node = ref.automaton->nodes[ref.index];
    if (const auto* t = std::get_if<TestTypeNode>(&node)) {
      id_of({ref.automaton, t->on_pass});
      id_of({ref.automaton, t->on_fail});
    } else if (const auto* l = std::get_if<TestLiteralNode>(&node)) {
      id_of({ref.automaton, l->on_pass});
      id_of({ref.automaton, l->on_fail});
    } else if (const auto* p = std::get_if<TestPredNode>(&node)) {
      id_of({ref.automaton, p->on_pass});
      id_of({ref.automaton, p->on_fail});
    } else if (const auto* b = std::get_if<BindNode>(&node)) {
      id_of({ref.automaton, b->next});
    } else if (const auto* a = std::get_if<AppTransformNode>(&node)) {
      id_of({ref.automaton, a->next});
    } else if (const auto* s = std::get_if<SeqLoopNode>(&node)) {
      id_of({s->body.get(), s->body->entry});
      id_of({ref.automaton, s->next});
      id_of({ref.automaton, s->on_fail});
    } else if (const auto* j = std::get_if<JoinNode>(&node)) {
      id_of({ref.automaton, j->target});
    }
    return id;
  }

  std::string ref(const Automaton* a, int index) {
    return "#" + std::to_string(ids.at(NodeRef{a, index}));
  }

  std::string render() {
    std::ostringstream out;
    for (std::size_t i = 0; i < order.size(); ++i) {
      NodeRef r = order[i];
      const Automaton* a = r.automaton;
      const AutomatonNode& node = a->nodes[r.index];
      out << "#" << i << " ";
      if (const auto* t = std::get_if<TestTypeNode>(&node)) {
        out << "test-type @" << format_occurrence(t->occ) << " ";
        switch (t->type) {
          case TypeTest::Pair: out << "pair"; break;
          case TypeTest::EmptyList: out << "empty"; break;
          case TypeTest::Struct: out << "struct:" << t->tag->name; break;
        }
        out << " => pass:" << ref(a, t->on_pass)
            << " fail:" << ref(a, t->on_fail);
      } else if (const auto* l = std::get_if<TestLiteralNode>(&node)) {
        out << "test-literal @" << format_occurrence(l->occ) << " "
            << print_value(l->literal) << " => pass:" << ref(a, l->on_pass)
            << " fail:" << ref(a, l->on_fail);
      } else if (const auto* p = std::get_if<TestPredNode>(&node)) {
        out << "test-pred @" << format_occurrence(p->occ) << " e"
            << p->pred_id << " => pass:" << ref(a, p->on_pass)
            << " fail:" << ref(a, p->on_fail);
      } else if (const auto* bind = std::get_if<BindNode>(&node)) {
        out << "bind " << bind->name << " @"
            << format_occurrence(bind->occ)
            << " => next:" << ref(a, bind->next);
      } else if (const auto* app = std::get_if<AppTransformNode>(&node)) {
        out << "app-transform a" << app->app_id << " @"
            << format_occurrence(app->occ) << " -> r" << app->result_root
            << " => next:" << ref(a, app->next);
      } else if (const auto* s = std::get_if<SeqLoopNode>(&node)) {
        out << "seq-loop @" << format_occurrence(s->occ)
            << " body:" << ref(s->body.get(), s->body->entry) << " vars:[";
        for (std::size_t v = 0; v < s->accumulated_vars.size(); ++v) {
          if (v) out << " ";
          out << s->accumulated_vars[v];
        }
        out << "] min-tail:" << s->min_tail_length << " rest:r"
            << s->rest_root << " => next:" << ref(a, s->next)
            << " fail:" << ref(a, s->on_fail);
      } else if (const auto* succ = std::get_if<SuccessNode>(&node)) {
        out << "success rhs:" << succ->rhs_index;
      } else if (std::holds_alternative<FailureNode>(node)) {
        out << "failure";
      } else {
        const auto& join = std::get<JoinNode>(node);
        out << "join => " << ref(a, join.target);
      }
      out << "\n";
    }
    return out.str();
  }
};

}  // namespace

std::string dump_ir(const CompiledMatch& cm) {
  Dumper dumper;
  dumper.id_of({&cm.automaton, cm.automaton.entry});
  return dumper.render();
}

}  // namespace pmx
