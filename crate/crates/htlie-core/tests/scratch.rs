use htlie_core::{
    canonical_form, enumerate_maximal, obstruction_anticommuting, paper_rows, Code, Signature,
};

#[test]
fn probe_obstruction_pairs() {
    for r in 3..=16u32 {
        let sig = Signature::new(r, 0).unwrap();
        let report = enumerate_maximal(sig);
        // Representative per class: the published code when a row matches,
        // otherwise the canonical form.
        let mut reps: Vec<(String, Code)> = report
            .classes
            .iter()
            .map(|c| (format!("{}*", c.id), c.canonical_code.clone()))
            .collect();
        for (label, supports) in paper_rows(r) {
            let code = Code::try_from_basis(sig, &supports).unwrap();
            let canonical = canonical_form(&code);
            for (i, class) in report.classes.iter().enumerate() {
                if class.canonical_code == canonical && reps[i].0.ends_with('*') {
                    reps[i] = (label.to_string(), code.clone());
                    break;
                }
            }
        }
        for i in 0..reps.len() {
            for j in (i + 1)..reps.len() {
                let (la, a) = &reps[i];
                let (lb, b) = &reps[j];
                let fwd = obstruction_anticommuting(a, b);
                let bwd = obstruction_anticommuting(b, a);
                if fwd.is_none() && bwd.is_none() {
                    println!("r={r}: no obstruction either way for {la} / {lb}");
                }
            }
        }
    }
    println!("probe complete");
}
