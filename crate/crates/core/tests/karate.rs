use std::path::PathBuf;

use resolv_core::io::{
    assignment_for_graph, load_edge_list, parse_edge_list, read_communities, write_edge_list,
    EdgeListFormat,
};
use resolv_core::resolution::{fit_extended_ppm, fit_ppm};
use resolv_core::{louvain_maximize, partition_stats, LouvainOptions, ResolutionParam};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

#[test]
fn karate_loads_with_expected_shape() {
    let g = load_edge_list(&data("karate.edges"), &EdgeListFormat::default()).unwrap();
    assert_eq!(g.graph.node_count(), 34);
    assert_eq!(g.graph.edge_count(), 78);
    // Numeric labels are ordered by value.
    assert_eq!(g.labels.label(0), "0");
    assert_eq!(g.labels.label(33), "33");
}

#[test]
fn karate_round_trips_through_writer() {
    let g = load_edge_list(&data("karate.edges"), &EdgeListFormat::default()).unwrap();
    let mut buf = Vec::new();
    write_edge_list(&mut buf, &g.graph, Some(&g.labels)).unwrap();
    let again = parse_edge_list(buf.as_slice(), &EdgeListFormat::default(), "buffer").unwrap();
    assert_eq!(again.graph, g.graph);
    assert_eq!(again.labels, g.labels);
}

#[test]
fn karate_bounds_match_published_fit() {
    let g = load_edge_list(&data("karate.edges"), &EdgeListFormat::default()).unwrap();
    let pairs = read_communities(&data("karate.communities")).unwrap();
    let truth =
        partition_stats(&g.graph, &assignment_for_graph(&g.labels, &pairs).unwrap()).unwrap();
    let fit = fit_extended_ppm(&g.graph, &truth).unwrap();
    assert!((fit.omega_out - 0.26).abs() <= 0.1, "{}", fit.omega_out);
    assert!((fit.min_diag() - 1.74).abs() <= 0.1, "{}", fit.min_diag());
    let ppm = fit_ppm(&g.graph, &truth).unwrap();
    assert!(ppm.omega_out <= ppm.gamma_mle && ppm.gamma_mle <= ppm.omega_in);
}

#[test]
fn louvain_inside_bounds_separates_factions() {
    let g = load_edge_list(&data("karate.edges"), &EdgeListFormat::default()).unwrap();
    let pairs = read_communities(&data("karate.communities")).unwrap();
    let truth = assignment_for_graph(&g.labels, &pairs).unwrap();
    let gamma = ResolutionParam::new(0.5).unwrap();
    let p = louvain_maximize(&g.graph, gamma, 1, &LouvainOptions::default()).unwrap();
    // Communities should respect the faction split almost everywhere.
    let nmi = resolv_core::metrics::nmi(p.assignment(), &truth).unwrap();
    assert!(nmi > 0.6, "{nmi}");
}
