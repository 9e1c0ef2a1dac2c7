#pragma once

#include "crnet/network.hpp"

#include <optional>
#include <span>
#include <vector>

namespace crnet {

/// Aggregate co-channel received power per channel, split by source kind.
/// -inf marks a channel with no source of that kind.
struct InterferenceReport {
    Point point;
    std::vector<double> tv_dbm;
    std::vector<double> cr_dbm;
};

/// Direct evaluation over an explicit source list (callers leave out the
/// link's own cell). Sources combine per the scenario's aggregation rule.
InterferenceReport interference_at(Point point, std::span<const ChannelEmitter> sources, const Scenario& scenario);

/// True iff both endpoints see TV <= tv_threshold and CR <= cr_threshold on
/// the channel.
bool admissible(const InterferenceReport& at_user,
                const InterferenceReport& at_bs,
                int channel,
                const IslConstraints& isl);

/// What a traditional BS can sense: sources above the floor and within the
/// radius, measured at the BS site.
struct LocalView {
    double floor_dbm = -103.0;
    double radius_m = 0.0;
};

/// Channel occupancy of one network build. Nodes are BS sites and user
/// devices; a link (user, bs, channel) makes the user an emitter and gives
/// the BS a carrier on that channel. Emitters of a link's own cell (its BS
/// and that BS's other users) never count against it.
///
/// Path gains are tabulated once, so queries are multiply-adds over the
/// co-channel sources, always summed in ascending node order.
class SpectrumState {
public:
    SpectrumState(const Scenario& scenario,
                  std::vector<Point> bs_positions,
                  std::vector<double> bs_eirp_dbm,
                  std::vector<Point> user_positions);

    int bs_count() const { return static_cast<int>(bs_pos_.size()); }
    int user_count() const { return static_cast<int>(user_pos_.size()); }
    int channel_count() const { return channels_; }
    const IslConstraints& isl() const { return isl_; }

    double bs_eirp_dbm(int bs) const { return bs_eirp_dbm_[bs]; }
    void set_bs_eirp(int bs, double eirp_dbm);
    /// Not part of a scenario; lets tests probe threshold monotonicity.
    void set_isl(const IslConstraints& isl) { isl_ = isl; }

    int bs_of(int user) const { return user_bs_[user]; }
    int channel_of(int user) const { return user_ch_[user]; }
    int carriers(int bs, int channel) const { return carrier_links_[idx(bs, channel)]; }
    int links_on(int channel) const { return static_cast<int>(users_on_[channel].size()); }
    int channels_in_use() const;

    InterferenceReport report_at_user(int user, int cell) const;
    InterferenceReport report_at_bs(int bs) const;

    bool endpoints_admissible(int user, int bs, int channel) const;
    /// Adding (user, bs, channel) keeps every co-channel link of another
    /// cell within its thresholds at both of its endpoints.
    bool incumbents_protected(int user, int bs, int channel) const;
    bool channel_admissible(int user, int bs, int channel) const
    {
        return endpoints_admissible(user, bs, channel) && incumbents_protected(user, bs, channel);
    }

    /// Lowest admissible channel index, or nullopt. `user` must be unlinked.
    std::optional<int> assign_channel(int user, int bs) const;

    /// Endpoint-only check restricted to the TV database plus the CR sources
    /// `bs` can sense.
    bool locally_admissible(int user, int bs, int channel, const LocalView& view) const;
    std::optional<int> assign_channel_local(int user, int bs, const LocalView& view) const;

    void add_link(int user, int bs, int channel);
    void remove_link(int user);

    /// Links with at least one endpoint over its threshold, audited against
    /// every source in the network.
    int isl_violations() const;

private:
    std::size_t idx(int bs, int channel) const
    {
        return static_cast<std::size_t>(bs) * static_cast<std::size_t>(channels_) + static_cast<std::size_t>(channel);
    }
    double g_bu(int bs, int user) const { return gain_bu_[static_cast<std::size_t>(bs) * user_pos_.size() + user]; }
    double g_bb(int a, int b) const { return gain_bb_[static_cast<std::size_t>(a) * bs_pos_.size() + b]; }
    double g_uu(int a, int b) const { return gain_uu_[static_cast<std::size_t>(a) * user_pos_.size() + b]; }

    double combine(double acc, double mw) const;
    double cr_mw_at_user(int user, int channel, int cell) const;
    double cr_mw_at_bs(int bs, int channel, int cell) const;
    bool cr_ok(double mw) const;
    bool tv_ok(double dbm) const { return dbm <= isl_.tv_threshold_dbm; }

    std::vector<Point> bs_pos_;
    std::vector<double> bs_eirp_dbm_;
    std::vector<double> bs_eirp_mw_;
    std::vector<Point> user_pos_;
    int channels_ = 0;
    IslConstraints isl_;
    Aggregation aggregation_ = Aggregation::linear_sum;
    double user_eirp_mw_ = 0.0;
    double user_eirp_dbm_ = 0.0;

    std::vector<double> gain_bu_;
    std::vector<double> gain_bb_;
    std::vector<double> gain_uu_;
    std::vector<double> tv_dbm_user_; // user x channel
    std::vector<double> tv_dbm_bs_;   // bs x channel

    std::vector<int> user_bs_;
    std::vector<int> user_ch_;
    std::vector<int> carrier_links_;          // bs x channel link counts
    std::vector<std::vector<int>> users_on_; // sorted user ids per channel
};

/// Rebuilds the occupancy of a finished solution.
SpectrumState spectrum_state(const NetworkSolution& solution, const Scenario& scenario);

/// Global ISL audit of a finished solution.
int isl_violations(const NetworkSolution& solution, const Scenario& scenario);

} // namespace crnet
