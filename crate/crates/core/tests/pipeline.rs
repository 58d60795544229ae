use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rsdl::collector::{collect_random, scan_incremental, verify_relation, ScanOptions};
use rsdl::field::FieldTower;
use rsdl::instance::{Instance, Mode};
use rsdl::io::{read_log_table, read_relations, write_log_table, write_relations, FieldHeader};
use rsdl::nt::factor_group_order;
use rsdl::solver::{derive_log_table, individual_log, solve_instance, SolveOptions};

#[test]
fn helper_field_pipeline_through_files() {
    let tower = FieldTower::new(7, 5, &[4, 1, 0, 0, 0, 1]).unwrap();
    let inst = Instance::new(tower, Mode::Hf { e: 2 }).unwrap();
    // 7^5 - 1 = 2 · 3 · 2801; the threshold sends 2801 to linear algebra
    let opts = SolveOptions {
        small_threshold: 100,
    };
    let out = scan_incremental(
        &inst,
        1,
        16805,
        ScanOptions {
            count: Some(60),
            ..Default::default()
        },
    )
    .unwrap();

    let mut rel_bytes = Vec::new();
    write_relations(&mut rel_bytes, &FieldHeader::of(&inst), &out.set).unwrap();
    let rel_file = read_relations(rel_bytes.as_slice()).unwrap();
    assert_eq!(rel_file.set, out.set);
    let inst2 = rel_file.header.instance().unwrap();

    let (table, timing) = derive_log_table(&rel_file.set, &inst2, opts).unwrap();
    assert!(timing.linear_algebra > std::time::Duration::ZERO);
    let mut table_bytes = Vec::new();
    write_log_table(&mut table_bytes, &inst2, &table).unwrap();
    let table2 = read_log_table(table_bytes.as_slice())
        .unwrap()
        .into_table(&inst2)
        .unwrap();
    assert_eq!(table2, table);

    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..50 {
        let t = rng.gen_range(0..inst2.order());
        let y = inst2.tower.x_pow(t);
        assert_eq!(individual_log(&table2, &inst2, &y, 0, None).unwrap(), t);
    }
}

#[test]
fn random_field_logs_match_construction() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (q, h) in [(5u64, 2usize), (11, 3), (17, 2), (13, 4)] {
        let fact = factor_group_order(q, h as u32).unwrap();
        let tower = FieldTower::random_primitive(q, h, &fact, &mut rng).unwrap();
        let inst = Instance::new(tower, Mode::Fq).unwrap();
        // force linear algebra for every factor above 8
        let (table, rels, _) = solve_instance(
            &inst,
            SolveOptions { small_threshold: 8 },
            ScanOptions::default(),
            32,
        )
        .unwrap();
        assert!(rels
            .iter()
            .all(|r| verify_relation(r, &inst) && table.balances(r)));
        for _ in 0..20 {
            let t = rng.gen_range(0..inst.order());
            let y = inst.tower.x_pow(t);
            assert_eq!(
                individual_log(&table, &inst, &y, 1, None).unwrap(),
                t,
                "GF({q}^{h})"
            );
        }
    }
}

#[test]
fn random_collection_rate_tracks_probability() {
    let inst = Instance::new(FieldTower::new(13, 3, &[11, 2, 0, 1]).unwrap(), Mode::Fq).unwrap();
    let (set, timing) = collect_random(&inst, 100, 42, None).unwrap();
    assert_eq!(set.len(), 100);
    // 286 of 2196 exponents decode; drawing 100 distinct ones needs about
    // 286 ln(286/186) = 123 hits, so the distinct rate is near 0.106
    let rate = timing.success_rate();
    assert!(rate > 0.07 && rate < 0.14, "rate {rate}");
}
