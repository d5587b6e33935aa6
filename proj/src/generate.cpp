#include "htn/generate.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace htn {

namespace {

std::string loc(int city, int pos) {
    return "l" + std::to_string(city) + "-" + std::to_string(pos);
}

const char* kLogisticsDomain = R"((define (domain logistics)
  (:predicates (box-at ?b ?l) (truck-at ?t ?l) (plane-at ?p ?l)
               (in-truck ?b ?t) (in-plane ?b ?p)
               (adjacent ?from ?to) (air-link ?from ?to)
               (in-city ?l ?c) (same-city ?c1 ?c2) (different-city ?c1 ?c2))
  (:operator (!load-truck ?b ?t ?l)
    (:pre (box-at ?b ?l) (truck-at ?t ?l))
    (:del (box-at ?b ?l))
    (:add (in-truck ?b ?t)))
  (:operator (!drive ?t ?from ?to)
    (:pre (truck-at ?t ?from) (adjacent ?from ?to))
    (:del (truck-at ?t ?from))
    (:add (truck-at ?t ?to)))
  (:operator (!unload-truck ?b ?t ?l)
    (:pre (in-truck ?b ?t) (truck-at ?t ?l))
    (:del (in-truck ?b ?t))
    (:add (box-at ?b ?l)))
  (:operator (!load-plane ?b ?p ?l)
    (:pre (box-at ?b ?l) (plane-at ?p ?l))
    (:del (box-at ?b ?l))
    (:add (in-plane ?b ?p)))
  (:operator (!fly ?p ?from ?to)
    (:pre (plane-at ?p ?from) (air-link ?from ?to))
    (:del (plane-at ?p ?from))
    (:add (plane-at ?p ?to)))
  (:operator (!unload-plane ?b ?p ?l)
    (:pre (in-plane ?b ?p) (plane-at ?p ?l))
    (:del (in-plane ?b ?p))
    (:add (box-at ?b ?l)))
  (:method (deliver ?b ?from ?to)
    (:branch 1
      (:pre (box-at ?b ?from) (plane-at ?p ?from) (air-link ?from ?mid)
            (in-city ?from ?c1) (in-city ?to ?c2) (different-city ?c1 ?c2))
      (:network
        (:tasks (t1 (!load-plane ?b ?p ?from))
                (t2 (!fly ?p ?from ?mid))
                (t3 (!unload-plane ?b ?p ?mid))
                (t4 (deliver ?b ?mid ?to)))
        (:order (t1 t2) (t2 t3) (t3 t4))))
    (:branch 2
      (:pre (box-at ?b ?from) (truck-at ?t ?from) (adjacent ?from ?mid))
      (:network
        (:tasks (t1 (!load-truck ?b ?t ?from))
                (t2 (!drive ?t ?from ?mid))
                (t3 (!unload-truck ?b ?t ?mid))
                (t4 (deliver ?b ?mid ?to)))
        (:order (t1 t2) (t2 t3) (t3 t4))))
    (:branch 3
      (:pre (box-at ?b ?to))
      (:network (:tasks)))))
)";

}  // namespace

GeneratedProblem gen_logistics(int boxes, int cities, int locs_per_city, unsigned seed) {
    if (boxes < 1 || cities < 1 || locs_per_city < 1)
        throw std::invalid_argument("gen_logistics requires all counts >= 1");
    const int m = cities, k = locs_per_city;
    std::mt19937 rng(seed);

    std::ostringstream init;
    auto fact = [&](const std::string& text) { init << "    (" << text << ")\n"; };
    for (int c = 1; c <= m; ++c) {
        for (int p = 1; p <= k; ++p) fact("in-city " + loc(c, p) + " c" + std::to_string(c));
        for (int p = 1; p < k; ++p) fact("adjacent " + loc(c, p) + " " + loc(c, p + 1));
        fact("same-city c" + std::to_string(c) + " c" + std::to_string(c));
        fact("truck-at t" + std::to_string(c) + " " + loc(c, 1));
    }
    for (int c = 1; c < m; ++c) fact("air-link " + loc(c, k) + " " + loc(c + 1, 1));
    for (int a = 1; a <= m; ++a)
        for (int b = 1; b <= m; ++b)
            if (a != b)
                fact("different-city c" + std::to_string(a) + " c" + std::to_string(b));
    fact("plane-at p1 " + loc(1, k));

    // Box routes. When there are at least two cities, box 1 crosses from
    // city 1 to city 2 (truck leg to the airport, then the plane). Every
    // other box makes a one-hop truck delivery; consecutive origins per
    // city keep that city's truck positioned for the next box. Boxes
    // beyond a city's road length start at their destination.
    struct Route {
        std::string origin, dest;
    };
    std::vector<Route> routes;
    std::vector<int> host;  // candidate cities for one-hop deliveries
    if (m == 1) host.push_back(1);
    else
        for (int c = 2; c <= m; ++c) host.push_back(c);
    std::shuffle(host.begin(), host.end(), rng);
    std::vector<int> pos(static_cast<size_t>(m) + 1, 1);
    if (m >= 2) pos[1] = k + 1;  // truck 1 is reserved for the crossing

    int assigned = 0;
    if (m >= 2) {
        routes.push_back({loc(1, 1), loc(2, 1)});
        ++assigned;
    }
    for (int b = assigned; b < boxes; ++b) {
        int c = host[static_cast<size_t>((b - assigned)) % host.size()];
        int p = pos[static_cast<size_t>(c)]++;
        if (p >= k) routes.push_back({loc(c, k), loc(c, k)});
        else routes.push_back({loc(c, p), loc(c, p + 1)});
    }
    for (size_t b = 0; b < routes.size(); ++b)
        fact("box-at b" + std::to_string(b + 1) + " " + routes[b].origin);

    std::ostringstream out;
    out << "(define (problem logistics-" << boxes << "x" << m << "x" << k << "-s" << seed
        << ")\n  (:domain logistics)\n  (:init\n"
        << init.str() << "  )\n  (:network\n    (:tasks";
    for (size_t b = 0; b < routes.size(); ++b)
        out << "\n      (t" << b + 1 << " (deliver b" << b + 1 << " " << routes[b].origin << " "
            << routes[b].dest << "))";
    out << ")";
    if (routes.size() > 1) {
        out << "\n    (:order";
        for (size_t b = 1; b < routes.size(); ++b) out << " (t" << b << " t" << b + 1 << ")";
        out << ")";
    }
    out << ")\n  (:engine state)\n  (:style totd)\n)\n";
    return {kLogisticsDomain, out.str()};
}

}  // namespace htn
