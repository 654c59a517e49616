#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "simulator.hpp"

namespace dobcbf {

/// Fixed 9-significant-digit rendering used by every CSV writer.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// Header: t,<states>,<r_name>,<w_name>,u_cmd,u_applied,h,b,b_hat,e,e_bound,y_bound,h_bar
inline void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                                 const std::string& r_name = "r",
                                 const std::string& w_name = "w") {
    out << "t";
    for (const auto& n : traj.state_names) out << ',' << n;
    out << ',' << r_name << ',' << w_name
        << ",u_cmd,u_applied,h,b,b_hat,e,e_bound,y_bound,h_bar\n";
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << format_number(traj.t[k]);
        for (const auto& s : traj.states) out << ',' << format_number(s[k]);
        for (const auto* col : {&traj.r, &traj.w, &traj.u_cmd, &traj.u_applied, &traj.h, &traj.b,
                                &traj.b_hat, &traj.e, &traj.e_bound, &traj.y_bound, &traj.h_bar})
            out << ',' << format_number((*col)[k]);
        out << '\n';
    }
}

}  // namespace dobcbf
