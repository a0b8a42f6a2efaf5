#pragma once

// Built-in ready-to-run configurations for the reference FBG device and the
// heterogeneous 7-core link. Emitted by `mcf-ttdl --fixtures`.

#include "mcf_ttdl/cli/run_job.hpp"

#include <string>
#include <vector>

namespace mcf::cli {

namespace detail {

inline std::string hetero_link_block() {
    return "[hetero]\n"
           "lambda0_nm = 1550\n"
           "length_km = 5\n"
           "d1_ps_km_nm = 14.75\n"
           "delta_d_ps_km_nm = 1\n"
           "s_ps_km_nm2 = 0.05\n";
}

inline std::string fbg_filter(const std::string& name, const std::string& comment, const std::string& select,
                              double f_stop_ghz) {
    return "# " + comment + "\n[job]\nkind = simulate-filter\nname = " + name +
           "\n\n[device]\npreset = reference\ngroup_index = 1.4682\n\n[select]\n" + select + "\n[grid]\nf_stop_ghz = " +
           format_double(f_stop_ghz) + "\npoints = 4001\n";
}

}  // namespace detail

inline std::vector<OutputFile> fixture_configs() {
    std::vector<OutputFile> out;
    const std::string link = detail::hetero_link_block();

    out.push_back({"hetero_link_1560.cfg",
                   "# 7-core heterogeneous link operated at 1560 nm (50 ps tap spacing)\n"
                   "[job]\nkind = simulate-filter\nname = hetero_link_1560\n\n" +
                       link + "\n[operating]\nlambda_m_nm = 1560\n\n[grid]\nf_stop_ghz = 60\npoints = 6001\n"});
    out.push_back({"hetero_link_1570.cfg",
                   "# same link at 1570 nm (100 ps tap spacing)\n"
                   "[job]\nkind = simulate-filter\nname = hetero_link_1570\n\n" +
                       link + "\n[operating]\nlambda_m_nm = 1570\n\n[grid]\nf_stop_ghz = 30\npoints = 6001\n"});
    out.push_back({"hetero_link_taps.cfg", "[job]\nkind = taps-hetero\nname = hetero_link_taps\n\n" + link +
                                               "\n[operating]\nlambda_m_nm = 1560\n"});
    out.push_back({"hetero_link_validate.cfg", "[job]\nkind = validate-hetero\nname = hetero_link_validate\n\n" +
                                                   link + "\n[band]\nmin_nm = 1550\nmax_nm = 1570\n"});

    out.push_back({"fbg_inscription.cfg",
                   "# reference three-core FBG device, nominal beam\n"
                   "[job]\nkind = validate-inscription\nname = fbg_inscription\n\n"
                   "[device]\npreset = reference\n\n[beam]\nwidth_um = 23\nheight_um = 40\n"});
    const int cores[] = {6, 5, 4};
    const char* spacings[] = {"20", "21", "22"};
    for (int i = 0; i < 3; ++i) {
        const auto name = "fbg_core" + std::to_string(cores[i]);
        out.push_back({name + ".cfg", detail::fbg_filter(name, "wavelength diversity, " + std::string(spacings[i]) +
                                                                   " mm grating spacing",
                                                         "regime = wavelength\ncore_id = " + std::to_string(cores[i]) +
                                                             "\n",
                                                         20.0)});
    }
    const double lambdas[] = {kLambda1Nm, kLambda2Nm, kLambda3Nm};
    const char* displacements[] = {"6", "7", "8"};
    for (int i = 0; i < 3; ++i) {
        const auto name = "fbg_lambda" + std::to_string(i + 1);
        out.push_back({name + ".cfg", detail::fbg_filter(name, "spatial diversity, " + std::string(displacements[i]) +
                                                                   " mm displacement between cores",
                                                         "regime = spatial\nbragg_nm = " + format_double(lambdas[i]) +
                                                             "\n",
                                                         60.0)});
    }

    out.push_back({"design_spacing.cfg",
                   "[job]\nkind = design-spacing\nname = design_spacing\n\n[target]\nfsr_ghz = 4.97\ngroup_index = "
                   "1.4682\n"});
    out.push_back({"design_wavelength.cfg",
                   "[job]\nkind = design-wavelength\nname = design_wavelength\n\n[target]\nfsr_ghz = 20\n\n[link]\n"
                   "delta_d_ps_km_nm = 1\nlength_km = 5\nlambda0_nm = 1550\n"});
    out.push_back({"solve_dispersion.cfg",
                   "# trench-assisted core\n"
                   "[job]\nkind = solve-dispersion\nname = solve_dispersion\n\n[profile]\nshape = trench\n"
                   "a1_um = 4.5\ndelta1_pct = 0.36\na2_um = 4\nw_um = 4\ndelta2_pct = 1\n"});
    out.push_back({"design_profile.cfg",
                   "# recover a trench profile from its own dispersion (small budget)\n"
                   "[job]\nkind = design-profile\nname = design_profile\n\n[target]\n"
                   "tau0_ps_km = 4899226.482328751\nd_ps_km_nm = 22.478115770344196\ns_ps_km_nm2 = 0.0645590428498744\n\n[fit]\nbudget = 150\n"});
    return out;
}

}  // namespace mcf::cli
