//! Shared fixtures for the criterion benchmarks in `benches/`.

use std::f64::consts::FRAC_PI_4;

use uavris_core::{
    ChannelRealization, EvalMode, ImpairmentProfile, PathLossParams, Position3, PowerAllocation,
    ScenarioGeometry, Scheme, SicReplica, SimPoint, UavPlacement,
};

/// The benchmark deployment: source, two users, and the hovering platform.
pub fn benchmark_geometry() -> ScenarioGeometry {
    ScenarioGeometry {
        uav: UavPlacement {
            radius: 5.0,
            height: 20.0,
            angle: FRAC_PI_4,
        },
        source: Position3::new(-5.0, 0.0, 0.0),
        user1: Position3::new(10.0, 0.0, -10.0),
        user2: Position3::new(5.0, 0.0, 5.0),
        neighbor_source_distance: 100.0,
        neighbor_user_distance: 100.0,
    }
}

/// The benchmark propagation parameters.
pub fn benchmark_path_loss() -> PathLossParams {
    PathLossParams {
        exponent_slope: -1.5,
        exponent_offset: 3.5,
        env_scale: 2.0,
        env_rate: 0.16,
        elevation: 1.2,
        plos_override: None,
    }
}

/// A ready-to-run simulation point at the given SNR and element count.
pub fn sim_point(snr_db: f64, n_elements: usize, k: f64, cells: usize, trials: u64) -> SimPoint {
    let p_s = 10f64.powf(snr_db / 10.0);
    SimPoint {
        point_id: 0xBEAC,
        master_seed: 0x5EED,
        trials,
        snr_db,
        noise_var: 1.0,
        n_elements,
        alloc: PowerAllocation::new(0.2).expect("0.2 is a valid share"),
        profile: ImpairmentProfile::symmetric(k, cells, p_s).expect("profile is valid"),
        geometry: benchmark_geometry(),
        path_loss: benchmark_path_loss(),
        sic_replica: SicReplica::Corrected,
        scheme: Scheme::Noma,
        channel: ChannelRealization::Random,
    }
}

/// Consistent-mode bookkeeping is the default subject of every benchmark.
pub const MODE: EvalMode = EvalMode::Consistent;
