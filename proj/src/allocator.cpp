#include "crnet/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace crnet {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double to_dbm(double mw) { return mw > 0.0 ? 10.0 * std::log10(mw) : kNegInf; }
double to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double combine_mw(Aggregation mode, double acc, double mw)
{
    return mode == Aggregation::linear_sum ? acc + mw : std::max(acc, mw);
}

} // namespace

InterferenceReport interference_at(Point point, std::span<const ChannelEmitter> sources, const Scenario& scenario)
{
    const auto n = static_cast<std::size_t>(scenario.s_max());
    std::vector<double> tv_mw(n, 0.0);
    std::vector<double> cr_mw(n, 0.0);
    const auto mode = scenario.allocator.aggregation;
    for (const auto& src : sources) {
        const double mw = to_mw(received_power(src.emitter, point, scenario.path_loss));
        auto& acc = src.emitter.kind == EmitterKind::tv ? tv_mw : cr_mw;
        acc[static_cast<std::size_t>(src.channel)] = combine_mw(mode, acc[static_cast<std::size_t>(src.channel)], mw);
    }
    InterferenceReport report{point, std::vector<double>(n), std::vector<double>(n)};
    for (std::size_t c = 0; c < n; ++c) {
        report.tv_dbm[c] = to_dbm(tv_mw[c]);
        report.cr_dbm[c] = to_dbm(cr_mw[c]);
    }
    return report;
}

bool admissible(const InterferenceReport& at_user, const InterferenceReport& at_bs, int channel, const IslConstraints& isl)
{
    const auto c = static_cast<std::size_t>(channel);
    return at_user.tv_dbm[c] <= isl.tv_threshold_dbm && at_bs.tv_dbm[c] <= isl.tv_threshold_dbm &&
           at_user.cr_dbm[c] <= isl.cr_threshold_dbm && at_bs.cr_dbm[c] <= isl.cr_threshold_dbm;
}

SpectrumState::SpectrumState(const Scenario& scenario,
                             std::vector<Point> bs_positions,
                             std::vector<double> bs_eirp_dbm,
                             std::vector<Point> user_positions)
    : bs_pos_(std::move(bs_positions)),
      bs_eirp_dbm_(std::move(bs_eirp_dbm)),
      user_pos_(std::move(user_positions)),
      channels_(scenario.s_max()),
      isl_(scenario.isl),
      aggregation_(scenario.allocator.aggregation),
      user_eirp_mw_(to_mw(scenario.allocator.user_eirp_dbm)),
      user_eirp_dbm_(scenario.allocator.user_eirp_dbm)
{
    if (bs_eirp_dbm_.size() != bs_pos_.size()) {
        throw std::invalid_argument("SpectrumState: one EIRP per BS required");
    }
    const auto nb = bs_pos_.size();
    const auto nu = user_pos_.size();
    const auto nc = static_cast<std::size_t>(channels_);
    const auto& cr = scenario.path_loss.cr;
    auto gain = [&cr](Point a, Point b) { return to_mw(-path_loss(cr, distance(a, b))); };

    bs_eirp_mw_.resize(nb);
    for (std::size_t b = 0; b < nb; ++b) {
        bs_eirp_mw_[b] = to_mw(bs_eirp_dbm_[b]);
    }
    gain_bu_.resize(nb * nu);
    for (std::size_t b = 0; b < nb; ++b) {
        for (std::size_t u = 0; u < nu; ++u) {
            gain_bu_[b * nu + u] = gain(bs_pos_[b], user_pos_[u]);
        }
    }
    gain_bb_.resize(nb * nb);
    for (std::size_t a = 0; a < nb; ++a) {
        for (std::size_t b = 0; b < nb; ++b) {
            gain_bb_[a * nb + b] = gain(bs_pos_[a], bs_pos_[b]);
        }
    }
    gain_uu_.resize(nu * nu);
    for (std::size_t a = 0; a < nu; ++a) {
        for (std::size_t b = a; b < nu; ++b) {
            gain_uu_[a * nu + b] = gain_uu_[b * nu + a] = gain(user_pos_[a], user_pos_[b]);
        }
    }

    const auto tv = tv_channel_emitters(scenario);
    auto tv_profile = [&](Point p, std::vector<double>& out, std::size_t row) {
        std::vector<double> mw(nc, 0.0);
        for (const auto& src : tv) {
            auto& acc = mw[static_cast<std::size_t>(src.channel)];
            acc = combine_mw(aggregation_, acc, to_mw(received_power(src.emitter, p, scenario.path_loss)));
        }
        for (std::size_t c = 0; c < nc; ++c) {
            out[row * nc + c] = to_dbm(mw[c]);
        }
    };
    tv_dbm_user_.resize(nu * nc);
    for (std::size_t u = 0; u < nu; ++u) {
        tv_profile(user_pos_[u], tv_dbm_user_, u);
    }
    tv_dbm_bs_.resize(nb * nc);
    for (std::size_t b = 0; b < nb; ++b) {
        tv_profile(bs_pos_[b], tv_dbm_bs_, b);
    }

    user_bs_.assign(nu, -1);
    user_ch_.assign(nu, -1);
    carrier_links_.assign(nb * nc, 0);
    users_on_.assign(nc, {});
}

void SpectrumState::set_bs_eirp(int bs, double eirp_dbm)
{
    bs_eirp_dbm_[static_cast<std::size_t>(bs)] = eirp_dbm;
    bs_eirp_mw_[static_cast<std::size_t>(bs)] = to_mw(eirp_dbm);
}

int SpectrumState::channels_in_use() const
{
    int n = 0;
    for (const auto& users : users_on_) {
        n += users.empty() ? 0 : 1;
    }
    return n;
}

double SpectrumState::combine(double acc, double mw) const
{
    return combine_mw(aggregation_, acc, mw);
}

double SpectrumState::cr_mw_at_user(int user, int channel, int cell) const
{
    double acc = 0.0;
    for (int b = 0; b < bs_count(); ++b) {
        if (b != cell && carrier_links_[idx(b, channel)] > 0) {
            acc = combine(acc, bs_eirp_mw_[static_cast<std::size_t>(b)] * g_bu(b, user));
        }
    }
    for (int v : users_on_[static_cast<std::size_t>(channel)]) {
        if (v != user && user_bs_[static_cast<std::size_t>(v)] != cell) {
            acc = combine(acc, user_eirp_mw_ * g_uu(v, user));
        }
    }
    return acc;
}

double SpectrumState::cr_mw_at_bs(int bs, int channel, int cell) const
{
    double acc = 0.0;
    for (int b = 0; b < bs_count(); ++b) {
        if (b != cell && carrier_links_[idx(b, channel)] > 0) {
            acc = combine(acc, bs_eirp_mw_[static_cast<std::size_t>(b)] * g_bb(b, bs));
        }
    }
    for (int v : users_on_[static_cast<std::size_t>(channel)]) {
        if (user_bs_[static_cast<std::size_t>(v)] != cell) {
            acc = combine(acc, user_eirp_mw_ * g_bu(bs, v));
        }
    }
    return acc;
}

bool SpectrumState::cr_ok(double mw) const
{
    return to_dbm(mw) <= isl_.cr_threshold_dbm;
}

InterferenceReport SpectrumState::report_at_user(int user, int cell) const
{
    const auto nc = static_cast<std::size_t>(channels_);
    InterferenceReport r{user_pos_[static_cast<std::size_t>(user)], std::vector<double>(nc), std::vector<double>(nc)};
    for (std::size_t c = 0; c < nc; ++c) {
        r.tv_dbm[c] = tv_dbm_user_[static_cast<std::size_t>(user) * nc + c];
        r.cr_dbm[c] = to_dbm(cr_mw_at_user(user, static_cast<int>(c), cell));
    }
    return r;
}

InterferenceReport SpectrumState::report_at_bs(int bs) const
{
    const auto nc = static_cast<std::size_t>(channels_);
    InterferenceReport r{bs_pos_[static_cast<std::size_t>(bs)], std::vector<double>(nc), std::vector<double>(nc)};
    for (std::size_t c = 0; c < nc; ++c) {
        r.tv_dbm[c] = tv_dbm_bs_[static_cast<std::size_t>(bs) * nc + c];
        r.cr_dbm[c] = to_dbm(cr_mw_at_bs(bs, static_cast<int>(c), bs));
    }
    return r;
}

bool SpectrumState::endpoints_admissible(int user, int bs, int channel) const
{
    const auto nc = static_cast<std::size_t>(channels_);
    const auto c = static_cast<std::size_t>(channel);
    if (!tv_ok(tv_dbm_user_[static_cast<std::size_t>(user) * nc + c]) ||
        !tv_ok(tv_dbm_bs_[static_cast<std::size_t>(bs) * nc + c])) {
        return false;
    }
    return cr_ok(cr_mw_at_bs(bs, channel, bs)) && cr_ok(cr_mw_at_user(user, channel, bs));
}

bool SpectrumState::incumbents_protected(int user, int bs, int channel) const
{
    const bool new_carrier = carrier_links_[idx(bs, channel)] == 0;
    const double bs_mw = bs_eirp_mw_[static_cast<std::size_t>(bs)];
    for (int v : users_on_[static_cast<std::size_t>(channel)]) {
        const int cell = user_bs_[static_cast<std::size_t>(v)];
        if (cell == bs) {
            continue;
        }
        double at_v = combine(cr_mw_at_user(v, channel, cell), user_eirp_mw_ * g_uu(user, v));
        if (new_carrier) {
            at_v = combine(at_v, bs_mw * g_bu(bs, v));
        }
        if (!cr_ok(at_v)) {
            return false;
        }
        double at_cell = combine(cr_mw_at_bs(cell, channel, cell), user_eirp_mw_ * g_bu(cell, user));
        if (new_carrier) {
            at_cell = combine(at_cell, bs_mw * g_bb(bs, cell));
        }
        if (!cr_ok(at_cell)) {
            return false;
        }
    }
    return true;
}

std::optional<int> SpectrumState::assign_channel(int user, int bs) const
{
    for (int c = 0; c < channels_; ++c) {
        if (channel_admissible(user, bs, c)) {
            return c;
        }
    }
    return std::nullopt;
}

bool SpectrumState::locally_admissible(int user, int bs, int channel, const LocalView& view) const
{
    const auto nc = static_cast<std::size_t>(channels_);
    const auto c = static_cast<std::size_t>(channel);
    if (!tv_ok(tv_dbm_user_[static_cast<std::size_t>(user) * nc + c]) ||
        !tv_ok(tv_dbm_bs_[static_cast<std::size_t>(bs) * nc + c])) {
        return false;
    }
    const Point site = bs_pos_[static_cast<std::size_t>(bs)];
    auto visible = [&](Point where, double mw_at_bs) {
        return to_dbm(mw_at_bs) >= view.floor_dbm && distance(where, site) <= view.radius_m;
    };
    double at_user = 0.0;
    double at_bs = 0.0;
    for (int b = 0; b < bs_count(); ++b) {
        if (b == bs || carrier_links_[idx(b, channel)] == 0) {
            continue;
        }
        const double p = bs_eirp_mw_[static_cast<std::size_t>(b)];
        if (visible(bs_pos_[static_cast<std::size_t>(b)], p * g_bb(b, bs))) {
            at_user = combine(at_user, p * g_bu(b, user));
            at_bs = combine(at_bs, p * g_bb(b, bs));
        }
    }
    for (int v : users_on_[c]) {
        if (v == user || user_bs_[static_cast<std::size_t>(v)] == bs) {
            continue;
        }
        if (visible(user_pos_[static_cast<std::size_t>(v)], user_eirp_mw_ * g_bu(bs, v))) {
            at_user = combine(at_user, user_eirp_mw_ * g_uu(v, user));
            at_bs = combine(at_bs, user_eirp_mw_ * g_bu(bs, v));
        }
    }
    return cr_ok(at_user) && cr_ok(at_bs);
}

std::optional<int> SpectrumState::assign_channel_local(int user, int bs, const LocalView& view) const
{
    for (int c = 0; c < channels_; ++c) {
        if (locally_admissible(user, bs, c, view)) {
            return c;
        }
    }
    return std::nullopt;
}

void SpectrumState::add_link(int user, int bs, int channel)
{
    const auto u = static_cast<std::size_t>(user);
    if (user_bs_[u] >= 0) {
        throw std::logic_error("SpectrumState::add_link: user already linked");
    }
    user_bs_[u] = bs;
    user_ch_[u] = channel;
    ++carrier_links_[idx(bs, channel)];
    auto& list = users_on_[static_cast<std::size_t>(channel)];
    list.insert(std::lower_bound(list.begin(), list.end(), user), user);
}

void SpectrumState::remove_link(int user)
{
    const auto u = static_cast<std::size_t>(user);
    if (user_bs_[u] < 0) {
        throw std::logic_error("SpectrumState::remove_link: user not linked");
    }
    const int channel = user_ch_[u];
    --carrier_links_[idx(user_bs_[u], channel)];
    auto& list = users_on_[static_cast<std::size_t>(channel)];
    list.erase(std::lower_bound(list.begin(), list.end(), user));
    user_bs_[u] = -1;
    user_ch_[u] = -1;
}

int SpectrumState::isl_violations() const
{
    int violations = 0;
    for (int u = 0; u < user_count(); ++u) {
        const int bs = user_bs_[static_cast<std::size_t>(u)];
        if (bs >= 0 && !endpoints_admissible(u, bs, user_ch_[static_cast<std::size_t>(u)])) {
            ++violations;
        }
    }
    return violations;
}

SpectrumState spectrum_state(const NetworkSolution& solution, const Scenario& scenario)
{
    std::vector<Point> bs_pos;
    std::vector<double> bs_eirp;
    for (const auto& bs : solution.base_stations) {
        bs_pos.push_back(bs.site.position);
        bs_eirp.push_back(bs.eirp_dbm);
    }
    std::vector<Point> user_pos;
    for (const auto& u : solution.users) {
        user_pos.push_back(u.position);
    }
    SpectrumState state(scenario, std::move(bs_pos), std::move(bs_eirp), std::move(user_pos));
    for (const auto& link : solution.links) {
        state.add_link(link.user, link.bs, link.channel);
    }
    return state;
}

int isl_violations(const NetworkSolution& solution, const Scenario& scenario)
{
    return spectrum_state(solution, scenario).isl_violations();
}

} // namespace crnet
