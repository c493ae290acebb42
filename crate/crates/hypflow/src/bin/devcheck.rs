// Development scratchpad; removed before release.
use hypflow::words::{
    bfs_ball, dehn_reduce, free_reduce, geodesic_length, Ball, BallOptions, Letter, Word,
};
use hypflow::{automaton, data, spectral};

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let which = args.get(1).map(String::as_str).unwrap_or("words");
    match which {
        "words" => words_checks(),
        "ball" => ball_checks(args.get(2).and_then(|s| s.parse().ok()).unwrap_or(5)),
        "cone" => cone_checks(
            args.get(2).and_then(|s| s.parse().ok()).unwrap_or(4),
            args.get(3).and_then(|s| s.parse().ok()).unwrap_or(8),
        ),
        "z4z6" => z4z6_checks(),
        other => eprintln!("unknown check {other}"),
    }
}

fn words_checks() {
    let p = data::octagon_presentation();
    // Relator reduces to the identity.
    let r = Word::parse("s4^-1 s3^-1 s2^-1 s1^-1 s4 s3 s2 s1", &p).unwrap();
    let rr = dehn_reduce(&r, &p).unwrap();
    println!("relator -> len {}", rr.len());
    // Length-5 prefix has geodesic length 3.
    let pre5 = Word(r.0[..5].to_vec());
    println!(
        "5-prefix geodesic length = {}",
        geodesic_length(&pre5, &p).unwrap()
    );
    // Free reduction basics.
    let w = Word::parse("s1 s2 s2^-1 s1", &p).unwrap();
    println!("free_reduce s1 s2 s2^-1 s1 -> {:?}", free_reduce(&w));
    // Idempotence on random words.
    let mut x: u64 = 12345;
    for _ in 0..200 {
        let mut letters = Vec::new();
        for _ in 0..30 {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            letters.push(Letter(((x >> 33) % 8) as u8));
        }
        let w = Word(letters);
        let r1 = dehn_reduce(&w, &p).unwrap();
        let r2 = dehn_reduce(&r1, &p).unwrap();
        assert_eq!(r1, r2, "idempotence");
    }
    println!("idempotence ok");
}

fn ball_checks(radius: u32) {
    let p = data::octagon_presentation();
    let t0 = std::time::Instant::now();
    let ball = bfs_ball(&p, radius).unwrap();
    println!(
        "octagon ball radius {radius}: counts {:?} in {:?}",
        ball.sphere_counts(),
        t0.elapsed()
    );
}

fn cone_checks(kmax: u32, radius: u32) {
    let p = data::octagon_presentation();
    let t0 = std::time::Instant::now();
    let ball = Ball::build(&p, radius, &BallOptions::default()).unwrap();
    println!("ball built in {:?}; counts {:?}", t0.elapsed(), ball.sphere_counts());
    for k in 2..=kmax {
        try_cone(&p, &ball, k);
    }
}

fn try_cone(p: &hypflow::words::Presentation, ball: &Ball, k: u32) {
    match automaton::conetype_from_ball(p, ball, k).and_then(|aut| {
        let report = aut.validate_against(p, ball);
        if report.all_ok() {
            Ok(aut)
        } else {
            Err(hypflow::Error::ConeTypeUnsound {
                k,
                reason: format!("{:?}", report.counterexample),
            })
        }
    }) {
        Ok(aut) => {
            println!(
                "conetype k={k}: {} states, sccs {:?}",
                aut.state_count(),
                aut.state_scc_sizes()
            );
            let comps = spectral::scc_decompose(&aut);
            for c in &comps {
                let m = spectral::component_matrix(&aut, &c);
                let pd = spectral::perron(&m, c.period, &Default::default()).unwrap();
                println!(
                    "  component {}: states {}, edges {}, period {}, log-eig {:.6}",
                    c.id,
                    c.states.len(),
                    c.edge_count(),
                    c.period,
                    pd.eigenvalue.ln()
                );
            }
        }
        Err(e) => println!("conetype k={k} failed: {e}"),
    }
}

fn z4z6_checks() {
    let p = data::z4z6_presentation();
    let ball = bfs_ball(&p, 8).unwrap();
    println!("z4z6 counts {:?}", ball.sphere_counts());
    let aut = automaton::build_freeproduct_automaton(4, 6).unwrap();
    println!("z4z6 automaton: {} states", aut.state_count());
    let report = aut.validate(&p, 8).unwrap();
    println!("validate: {report:?}");
    let counts = aut.path_counts(8);
    println!("path counts {counts:?}");
}
