#include "procosh/dot_export.hpp"

#include <sstream>

namespace procosh {

namespace {

void emit_level_nodes(std::ostream& os, const std::string& prefix, int level, int count,
                      const std::string& extra) {
  os << "  { rank=same;";
  for (int x = 0; x < count; ++x) os << " " << prefix << level << "_" << x;
  os << " }\n";
  for (int x = 0; x < count; ++x)
    os << "  " << prefix << level << "_" << x << " [label=\"" << x << extra << "\"];\n";
}

}  // namespace

std::string space_to_dot(const ProSpace& x, int truncation) {
  std::ostringstream os;
  os << "digraph space {\n  rankdir=BT;\n";
  for (int n = 0; n <= truncation; ++n) emit_level_nodes(os, "l", n, x.level(n).size(), "");
  for (int n = 0; n < truncation; ++n) {
    FinMor tr = x.step(n);
    for (int e = 0; e < tr.dom().size(); ++e)
      os << "  l" << n + 1 << "_" << e << " -> l" << n << "_" << tr(e) << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string cosheaf_to_dot(const Cosheaf& a, int truncation) {
  std::ostringstream os;
  os << "digraph cosheaf {\n  rankdir=BT;\n";
  for (int n = 0; n <= truncation; ++n) {
    FamObj fam = a.level(n);
    os << "  { rank=same;";
    for (int x = 0; x < fam.index_size(); ++x) os << " c" << n << "_" << x;
    os << " }\n";
    for (int x = 0; x < fam.index_size(); ++x)
      os << "  c" << n << "_" << x << " [label=\"" << x << " | " << instance_name(fam.tag)
         << ":" << fam.fibre(x).size() << "\"];\n";
  }
  for (int n = 0; n < truncation; ++n) {
    FamMor st = a.step(n);
    for (int x = 0; x < st.dom.index_size(); ++x)
      os << "  c" << n + 1 << "_" << x << " -> c" << n << "_" << st.base_at(x) << ";\n";
  }
  os << "}\n";
  return os.str();
}

std::string bundle_to_dot(const ProBundle& b, int truncation) {
  std::ostringstream os;
  os << "digraph bundle {\n  rankdir=BT;\n";
  for (int n = 0; n <= truncation; ++n) {
    emit_level_nodes(os, "e", n, b.total().level(n).size(), "");
    emit_level_nodes(os, "x", n, b.base().level(n).size(), "");
    FinMor p = b.proj(n);
    for (int e = 0; e < p.dom().size(); ++e)
      os << "  e" << n << "_" << e << " -> x" << n << "_" << p(e) << " [style=dashed];\n";
  }
  for (int n = 0; n < truncation; ++n) {
    FinMor te = b.total().step(n);
    for (int e = 0; e < te.dom().size(); ++e)
      os << "  e" << n + 1 << "_" << e << " -> e" << n << "_" << te(e) << ";\n";
    FinMor tx = b.base().step(n);
    for (int x = 0; x < tx.dom().size(); ++x)
      os << "  x" << n + 1 << "_" << x << " -> x" << n << "_" << tx(x) << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace procosh
