#include "dqs/diagram.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

namespace dqs {

namespace {

struct Box {
  const Action* act;
  int proc;
  int branch_depth;  // how many branchings above this action
  int wire_min, wire_max;
  double x0, x1;
};

std::vector<Box> collect_boxes(const Scenario& sc) {
  std::vector<Box> boxes;
  std::map<QubitId, int> wire;
  for (std::size_t i = 0; i < sc.qubits.size(); ++i)
    wire[sc.qubits[i]] = static_cast<int>(i);
  for (std::size_t pi = 0; pi < sc.system.processes.size(); ++pi) {
    const Process& p = sc.system.processes[pi];
    for (std::size_t n = 0; n < p.actions.size(); ++n) {
      const Action& a = p.actions[n];
      int wmin = static_cast<int>(sc.qubits.size()), wmax = 0;
      for (const auto& q : a.operation.qubits) {
        wmin = std::min(wmin, wire.at(q));
        wmax = std::max(wmax, wire.at(q));
      }
      int depth = 0;
      for (int cur = static_cast<int>(n); p.parent[cur] != -1;
           cur = p.parent[cur])
        if (p.children[p.parent[cur]].size() >= 2) ++depth;
      boxes.push_back(Box{&a, static_cast<int>(pi), depth, wmin, wmax,
                          to_double(a.interval.lo), to_double(a.interval.hi)});
    }
  }
  return boxes;
}

double max_time(const std::vector<Box>& boxes) {
  double m = 1.0;
  for (const auto& b : boxes) m = std::max(m, b.x1);
  return m;
}

}  // namespace

std::string render_ascii(const Scenario& sc) {
  const auto boxes = collect_boxes(sc);
  const double tmax = max_time(boxes);
  const int width = 100;
  const double scale = (width - 12) / tmax;

  std::ostringstream out;
  out << "time 0";
  out << std::string(width - 12, '-') << "> " << tmax << "\n";
  for (std::size_t w = 0; w < sc.qubits.size(); ++w) {
    // The wire line plus extra lines for branch alternatives.
    std::vector<std::string> lines;
    auto line_at = [&](int depth) -> std::string& {
      while (static_cast<int>(lines.size()) <= depth)
        lines.push_back(lines.empty()
                            ? sc.qubits[w] + ": " +
                                  std::string(width, lines.empty() ? '-' : ' ')
                            : std::string(sc.qubits[w].size() + 2, ' ') +
                                  std::string(width, ' '));
      return lines[static_cast<std::size_t>(depth)];
    };
    line_at(0);
    for (const auto& b : boxes) {
      if (static_cast<int>(w) < b.wire_min || static_cast<int>(w) > b.wire_max)
        continue;
      const int col = static_cast<int>(sc.qubits[w].size()) + 2 +
                      static_cast<int>(b.x0 * scale);
      std::string label = "[" + b.act->id + "]";
      std::string& line = line_at(b.branch_depth);
      for (std::size_t k = 0; k < label.size(); ++k) {
        const std::size_t pos = static_cast<std::size_t>(col) + k;
        if (pos < line.size()) line[pos] = label[k];
      }
    }
    for (const auto& l : lines) out << l << "\n";
  }
  return out.str();
}

std::string render_svg(const Scenario& sc) {
  const auto boxes = collect_boxes(sc);
  const double tmax = max_time(boxes);
  const double sx = 120.0;  // pixels per time unit
  const double wire_gap = 90.0;
  const double branch_gap = 22.0;
  const double h = wire_gap * (static_cast<double>(sc.qubits.size()) + 0.5);
  const double wdt = sx * tmax + 120.0;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << wdt
      << "\" height=\"" << h << "\" font-family=\"monospace\">\n";
  for (std::size_t w = 0; w < sc.qubits.size(); ++w) {
    const double y = wire_gap * (static_cast<double>(w) + 0.75);
    out << "  <line x1=\"60\" y1=\"" << y << "\" x2=\"" << (wdt - 20)
        << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
    out << "  <text x=\"8\" y=\"" << (y + 4) << "\">" << sc.qubits[w]
        << "</text>\n";
  }
  for (const auto& b : boxes) {
    const double x = 60.0 + b.x0 * sx;
    const double bw = std::max(10.0, (b.x1 - b.x0) * sx);
    const double y0 = wire_gap * (b.wire_min + 0.75) - 16.0 +
                      branch_gap * b.branch_depth;
    const double bh = wire_gap * (b.wire_max - b.wire_min) + 32.0;
    out << "  <rect x=\"" << x << "\" y=\"" << y0 << "\" width=\"" << bw
        << "\" height=\"" << bh
        << "\" fill=\"white\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "  <text x=\"" << (x + 3) << "\" y=\"" << (y0 + 14) << "\">"
        << b.act->id << "</text>\n";
    // Fork connector for branch alternatives.
    if (b.branch_depth > 0)
      out << "  <line x1=\"" << (x - 6) << "\" y1=\"" << (y0 + bh / 2)
          << "\" x2=\"" << x << "\" y2=\"" << (y0 + bh / 2)
          << "\" stroke=\"black\" stroke-dasharray=\"3,2\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace dqs
