#include "porefill/percolation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace porefill::pnmperc {

double entry_pressure(double throat_diameter_um, const FluidPair& fluids) {
    if (!(throat_diameter_um > 0.0))
        throw Error(ErrorCode::NONPOSITIVE_INPUT, "throat diameter must be positive");
    const double theta = fluids.contact_angle_deg * std::numbers::pi / 180.0;
    const double d_m = throat_diameter_um * 1e-6;
    return -4.0 * fluids.surface_tension * std::cos(theta) / d_m;
}

namespace {

// Defender connectivity: uninvaded pores joined by throats whose endpoints
// are both uninvaded. Components without an outlet-face pore are trapped.
void mark_trapped(const PoreNetwork& net, const std::vector<char>& pore_invaded,
                  const std::vector<char>& is_outlet, std::vector<char>& trapped) {
    const std::size_t n = net.pores.size();
    std::vector<int> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    auto find = [&](int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    };
    for (const auto& t : net.throats) {
        if (pore_invaded[static_cast<std::size_t>(t.pore_a)] ||
            pore_invaded[static_cast<std::size_t>(t.pore_b)])
            continue;
        int ra = find(t.pore_a), rb = find(t.pore_b);
        if (ra != rb) parent[static_cast<std::size_t>(ra)] = rb;
    }
    std::vector<char> root_escapes(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!pore_invaded[i] && is_outlet[i])
            root_escapes[static_cast<std::size_t>(find(static_cast<int>(i)))] = 1;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!pore_invaded[i] && !root_escapes[static_cast<std::size_t>(find(static_cast<int>(i)))])
            trapped[i] = 1;
    }
}

}  // namespace

PercolationResult invasion_percolation(const PoreNetwork& net, const FluidPair& fluids,
                                       Face inlet, Face outlet, bool trapping) {
    const std::size_t n_pores = net.pores.size();
    if (n_pores == 0) throw Error(ErrorCode::EMPTY_NETWORK, "network has no pores");
    const auto& inlet_pores = net.face_labels[static_cast<std::size_t>(inlet)];
    if (inlet_pores.empty())
        throw Error(ErrorCode::NO_INLET_PORES, "no pore touches the inlet face");

    double total_volume = 0.0;
    for (const auto& p : net.pores) total_volume += p.volume;

    std::vector<char> is_outlet(n_pores, 0);
    for (int id : net.face_labels[static_cast<std::size_t>(outlet)])
        is_outlet[static_cast<std::size_t>(id)] = 1;

    std::vector<std::vector<int>> pore_throats(n_pores);
    for (std::size_t t = 0; t < net.throats.size(); ++t) {
        pore_throats[static_cast<std::size_t>(net.throats[t].pore_a)].push_back(
            static_cast<int>(t));
        pore_throats[static_cast<std::size_t>(net.throats[t].pore_b)].push_back(
            static_cast<int>(t));
    }

    std::vector<char> pore_invaded(n_pores, 0);
    std::vector<char> throat_invaded(net.throats.size(), 0);
    std::vector<char> throat_queued(net.throats.size(), 0);
    std::vector<char> trapped(n_pores, 0);

    struct Frontier {
        double pressure;
        int throat;
    };
    auto cmp = [](const Frontier& a, const Frontier& b) {
        if (a.pressure != b.pressure) return a.pressure > b.pressure;  // min-heap
        return a.throat > b.throat;                                    // smaller id first
    };
    std::priority_queue<Frontier, std::vector<Frontier>, decltype(cmp)> frontier(cmp);

    auto push_throats = [&](int pore) {
        for (int t : pore_throats[static_cast<std::size_t>(pore)]) {
            if (throat_invaded[static_cast<std::size_t>(t)] ||
                throat_queued[static_cast<std::size_t>(t)])
                continue;
            throat_queued[static_cast<std::size_t>(t)] = 1;
            frontier.push({entry_pressure(net.throats[static_cast<std::size_t>(t)].diameter,
                                          fluids),
                           t});
        }
    };

    // Inlet-face pores start invaded; their volume is booked into the event
    // list at the first event pressure (there is no finite pressure of their
    // own to record).
    double invaded_volume = 0.0;
    std::vector<int> pending_inlet;
    for (int id : inlet_pores) {
        pore_invaded[static_cast<std::size_t>(id)] = 1;
        invaded_volume += net.pores[static_cast<std::size_t>(id)].volume;
        pending_inlet.push_back(id);
        push_throats(id);
    }
    if (trapping) mark_trapped(net, pore_invaded, is_outlet, trapped);

    PercolationResult res;
    double applied = -std::numeric_limits<double>::infinity();
    bool first_event_seen = false;

    auto flush_inlet_events = [&](double pressure) {
        double cum = 0.0;
        for (int id : pending_inlet) {
            cum += net.pores[static_cast<std::size_t>(id)].volume;
            res.events.push_back({pressure, true, id, cum / total_volume});
        }
        pending_inlet.clear();
    };

    while (!frontier.empty()) {
        auto [p_entry, t_id] = frontier.top();
        frontier.pop();
        const auto& t = net.throats[static_cast<std::size_t>(t_id)];
        int far = -1;
        bool a_inv = pore_invaded[static_cast<std::size_t>(t.pore_a)] != 0;
        bool b_inv = pore_invaded[static_cast<std::size_t>(t.pore_b)] != 0;
        if (!a_inv && !b_inv) continue;  // stale entry
        if (!a_inv) far = t.pore_a;
        if (!b_inv) far = t.pore_b;
        if (far >= 0 && trapping && trapped[static_cast<std::size_t>(far)])
            continue;  // frozen cluster, never invaded

        applied = std::max(applied, p_entry);
        if (!first_event_seen) {
            first_event_seen = true;
            flush_inlet_events(applied);
        }
        throat_invaded[static_cast<std::size_t>(t_id)] = 1;
        res.events.push_back({applied, false, t_id, invaded_volume / total_volume});
        if (far >= 0) {
            pore_invaded[static_cast<std::size_t>(far)] = 1;
            invaded_volume += net.pores[static_cast<std::size_t>(far)].volume;
            res.events.push_back({applied, true, far, invaded_volume / total_volume});
            push_throats(far);
            if (trapping) mark_trapped(net, pore_invaded, is_outlet, trapped);
        }
    }

    if (!pending_inlet.empty()) {
        // no throat was ever invaded; the inlet reservoir is the whole story
        flush_inlet_events(-std::numeric_limits<double>::infinity());
    }

    // Recompute the final saturation in pore-id order so a fully invaded
    // network lands on exactly 1.
    double invaded_sum = 0.0;
    for (std::size_t i = 0; i < n_pores; ++i)
        if (pore_invaded[i]) invaded_sum += net.pores[i].volume;
    res.final_saturation = invaded_sum / total_volume;
    if (!res.events.empty()) res.events.back().cumulative_saturation = res.final_saturation;

    for (std::size_t i = 0; i < n_pores; ++i)
        if (trapped[i]) res.trapped_pores.push_back(static_cast<int>(i));
    return res;
}

PressureSaturationCurve curve_from_result(const PercolationResult& res,
                                          const std::vector<double>& pressure_grid) {
    for (std::size_t i = 1; i < pressure_grid.size(); ++i)
        if (pressure_grid[i] < pressure_grid[i - 1])
            throw Error(ErrorCode::BAD_GEOMETRY, "pressure grid must be sorted ascending");
    PressureSaturationCurve curve;
    std::size_t e = 0;
    double s = 0.0;
    for (double p : pressure_grid) {
        while (e < res.events.size() && res.events[e].applied_pressure <= p) {
            s = res.events[e].cumulative_saturation;
            ++e;
        }
        curve.points.push_back({p, s});
    }
    return curve;
}

}  // namespace porefill::pnmperc
