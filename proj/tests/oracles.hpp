#pragma once
// Independent brute-force evaluations shared by unit and acceptance tests.

#include "support.hpp"

#include "crnet/allocator.hpp"
#include "crnet/pareto.hpp"

#include <cmath>
#include <vector>

namespace crnet::test {

/// Field in V/m as a product of linear factors, in long double.
inline long double field_oracle(long double eirp_dbm, long double f_mhz, long double pl_db)
{
    return std::pow(10.0L, eirp_dbm / 20.0L) * f_mhz * std::pow(10.0L, -pl_db / 20.0L) * std::pow(10.0L, -43.15L / 20.0L);
}

inline long double path_loss_oracle(const PathLossParams& p, long double d)
{
    const long double clamped = d < p.d0_m ? static_cast<long double>(p.d0_m) : d;
    return p.pl0_db + 10.0L * p.exponent * std::log10(clamped / p.d0_m);
}

/// BS sites, their EIRPs and user positions for a SpectrumState.
struct Layout {
    Scenario scenario;
    std::vector<Point> bs;
    std::vector<double> eirp;
    std::vector<Point> users;

    SpectrumState state() const { return SpectrumState(scenario, bs, eirp, users); }
};

inline Layout random_layout(Gen& gen, int n_bs, int n_users, int channels)
{
    Layout l{micro_scenario(3000, 3000, 1, channels, n_users), {}, {}, {}};
    l.scenario.tv_transmitters.push_back({"T", {-6000, 1500}, 85.0, gen.integer(0, channels - 1)});
    l.scenario.isl.cr_threshold_dbm = gen.uniform(-110, -90);
    for (int b = 0; b < n_bs; ++b) {
        l.bs.push_back({gen.uniform(0, 3000), gen.uniform(0, 3000)});
        l.eirp.push_back(gen.uniform(10, 40));
    }
    for (int u = 0; u < n_users; ++u) {
        l.users.push_back({gen.uniform(0, 3000), gen.uniform(0, 3000)});
    }
    return l;
}

/// Co-channel sources seen by `user` if it were served by `cell`, rebuilt
/// from the link table.
inline std::vector<ChannelEmitter> sources_for(const Layout& l, const SpectrumState& st, int user, int cell)
{
    std::vector<ChannelEmitter> out = tv_channel_emitters(l.scenario);
    const double f = 600.0;
    for (int b = 0; b < st.bs_count(); ++b) {
        for (int c = 0; c < st.channel_count(); ++c) {
            if (b != cell && st.carriers(b, c) > 0) {
                out.push_back({{l.bs[static_cast<std::size_t>(b)], st.bs_eirp_dbm(b), f, EmitterKind::cr_bs}, c});
            }
        }
    }
    for (int v = 0; v < st.user_count(); ++v) {
        if (v != user && st.bs_of(v) >= 0 && st.bs_of(v) != cell) {
            out.push_back({{l.users[static_cast<std::size_t>(v)], l.scenario.allocator.user_eirp_dbm, f, EmitterKind::cr_user},
                           st.channel_of(v)});
        }
    }
    return out;
}

inline bool oracle_endpoints(const Layout& l, const SpectrumState& st, int user, int bs, int channel)
{
    const auto src = sources_for(l, st, user, bs);
    const auto at_user = interference_at(l.users[static_cast<std::size_t>(user)], src, l.scenario);
    const auto at_bs = interference_at(l.bs[static_cast<std::size_t>(bs)], src, l.scenario);
    return admissible(at_user, at_bs, channel, st.isl());
}

/// Admissibility by trial insertion: the candidate's endpoints and every
/// co-channel link of another cell afterwards.
inline bool oracle_admissible(const Layout& l, SpectrumState st, int user, int bs, int channel)
{
    if (!oracle_endpoints(l, st, user, bs, channel)) {
        return false;
    }
    st.add_link(user, bs, channel);
    for (int v = 0; v < st.user_count(); ++v) {
        if (v != user && st.bs_of(v) >= 0 && st.bs_of(v) != bs && st.channel_of(v) == channel &&
            !oracle_endpoints(l, st, v, st.bs_of(v), channel)) {
            return false;
        }
    }
    return true;
}

/// Non-dominated indices by the quadratic definition.
inline std::vector<std::size_t> brute_front(const std::vector<ParetoPoint>& pts)
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            dominated = dominated || (j != i && dominates(pts[j].metrics, pts[i].metrics));
        }
        if (!dominated) {
            out.push_back(i);
        }
    }
    return out;
}

} // namespace crnet::test
