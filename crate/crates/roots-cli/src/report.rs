//! Serializable views of run records and the benchmark table, with
//! table/CSV/JSON renderers.

use roots_core::bench::{BenchmarkReport, RunRecord};
use serde::Serialize;

/// One solve, in the stable JSON schema.
#[derive(Serialize, Debug)]
pub struct RunDto {
    pub method: String,
    pub problem: String,
    pub iters: Vec<IterDto>,
    pub iter_count: u32,
    pub tnfe: u64,
    pub coc: Option<f64>,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub empirical_constant: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

#[derive(Serialize, Debug)]
pub struct IterDto {
    pub k: u32,
    pub err: String,
    pub digits: u32,
    pub evals: u32,
}

impl RunDto {
    pub fn from_record(r: &RunRecord) -> RunDto {
        RunDto {
            method: r.method.name(),
            problem: r.problem_id.clone(),
            iters: r
                .iterations
                .iter()
                .map(|it| IterDto {
                    k: it.k,
                    err: it.err_mag.to_sci_string(6),
                    digits: it.digits_used,
                    evals: it.evals,
                })
                .collect(),
            iter_count: r.iter_count,
            tnfe: r.tnfe,
            coc: r.coc,
            converged: r.converged,
            empirical_constant: r.empirical_constant,
            diagnostic: r.diagnostic.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Per-iteration CSV with a header row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,err,digits,evals\n");
        for it in &self.iters {
            out.push_str(&format!("{},{},{},{}\n", it.k, it.err, it.digits, it.evals));
        }
        out
    }

    /// Human-readable iteration trace.
    pub fn to_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("{} on {}\n", self.method, self.problem));
        out.push_str(&format!("{:>4} {:>8} {:>6}  {}\n", "k", "digits", "evals", "|e_k|"));
        for it in &self.iters {
            if it.k == 0 {
                out.push_str(&format!("{:>4} {:>8} {:>6}  {}\n", it.k, "-", "-", it.err));
            } else {
                out.push_str(&format!(
                    "{:>4} {:>8} {:>6}  {}\n",
                    it.k, it.digits, it.evals, it.err
                ));
            }
        }
        out.push_str(&format!(
            "converged: {}  iterations: {}  TNFE: {}  COC: {}\n",
            self.converged,
            self.iter_count,
            self.tnfe,
            self.coc.map_or("n/a".to_string(), |c| format!("{c:.3}")),
        ));
        if let Some(d) = &self.diagnostic {
            out.push_str(&format!("diagnostic: {d}\n"));
        }
        out
    }
}

/// The iteration-count matrix with totals, in the stable JSON schema.
#[derive(Serialize, Debug)]
pub struct Table4Dto {
    pub eta: u32,
    pub methods: Vec<String>,
    pub problems: Vec<String>,
    /// iterations[problem][method]; a diverged cell is null.
    pub iterations: Vec<Vec<Option<u32>>>,
    pub iter_totals: Vec<u64>,
    pub tnfe_totals: Vec<u64>,
    pub coc: Vec<Vec<Option<f64>>>,
    /// (problem, method) pairs excluded from the totals.
    pub diverged: Vec<(String, String)>,
}

impl Table4Dto {
    pub fn from_report(rep: &BenchmarkReport) -> Table4Dto {
        let n = rep.methods.len();
        let mut iterations = Vec::new();
        let mut coc = Vec::new();
        for (pi, _) in rep.problem_ids.iter().enumerate() {
            let mut row = Vec::with_capacity(n);
            let mut crow = Vec::with_capacity(n);
            for mi in 0..n {
                let cell = rep.cell(pi, mi);
                row.push(cell.converged.then_some(cell.iter_count));
                crow.push(cell.coc);
            }
            iterations.push(row);
            coc.push(crow);
        }
        Table4Dto {
            eta: rep.eta,
            methods: rep.methods.iter().map(|m| m.name()).collect(),
            problems: rep.problem_ids.clone(),
            iterations,
            iter_totals: rep.iter_totals(),
            tnfe_totals: rep.tnfe_totals(),
            coc,
            diverged: rep.diverged_cells(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("problem");
        for m in &self.methods {
            out.push(',');
            out.push_str(m);
        }
        out.push('\n');
        for (pi, p) in self.problems.iter().enumerate() {
            out.push_str(p);
            for v in &self.iterations[pi] {
                out.push(',');
                match v {
                    Some(n) => out.push_str(&n.to_string()),
                    None => out.push_str("diverged"),
                }
            }
            out.push('\n');
        }
        out.push_str("Iter");
        for t in &self.iter_totals {
            out.push_str(&format!(",{t}"));
        }
        out.push_str("\nTNFE");
        for t in &self.tnfe_totals {
            out.push_str(&format!(",{t}"));
        }
        out.push('\n');
        out
    }

    /// Markdown-style aligned table.
    pub fn to_table(&self) -> String {
        let w = 8usize;
        let mut out = format!("iteration counts, eta = {}\n\n", self.eta);
        out.push_str(&format!("| {:<8} |", "problem"));
        for m in &self.methods {
            out.push_str(&format!(" {m:>w$} |"));
        }
        out.push('\n');
        out.push_str(&format!("|{:-<10}|", ""));
        for _ in &self.methods {
            out.push_str(&format!("{:-<w$}--|", ""));
        }
        out.push('\n');
        for (pi, p) in self.problems.iter().enumerate() {
            out.push_str(&format!("| {p:<8} |"));
            for v in &self.iterations[pi] {
                match v {
                    Some(n) => out.push_str(&format!(" {n:>w$} |")),
                    None => out.push_str(&format!(" {:>w$} |", "div")),
                }
            }
            out.push('\n');
        }
        out.push_str(&format!("| {:<8} |", "Iter"));
        for t in &self.iter_totals {
            out.push_str(&format!(" {t:>w$} |"));
        }
        out.push('\n');
        out.push_str(&format!("| {:<8} |", "TNFE"));
        for t in &self.tnfe_totals {
            out.push_str(&format!(" {t:>w$} |"));
        }
        out.push('\n');
        if !self.diverged.is_empty() {
            out.push_str("\ndiverged cells (excluded from totals):\n");
            for (p, m) in &self.diverged {
                out.push_str(&format!("  {p} / {m}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use roots_core::bench::{policy_for, run};
    use roots_core::methods::method_by_name;
    use roots_core::problems::Problem;

    fn quick_run() -> RunRecord {
        let p = Problem::polynomial("quad", &[-1, 0, 1], "1.5", Some("1"));
        let m = method_by_name("psi2_4").unwrap();
        let policy = policy_for(&m, 80, 16000).unwrap();
        run(&m, &p, &policy).unwrap()
    }

    #[test]
    fn run_dto_schema_fields() {
        let dto = RunDto::from_record(&quick_run());
        let json = dto.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        for field in ["method", "problem", "iters", "iter_count", "tnfe", "coc", "converged"] {
            assert!(v.get(field).is_some(), "missing field {field}");
        }
        assert_eq!(v["method"], "psi2_4");
        assert_eq!(v["problem"], "quad");
        assert!(v["iters"].as_array().unwrap().len() as u64 > 0);
        let it = &v["iters"][1];
        for field in ["k", "err", "digits", "evals"] {
            assert!(it.get(field).is_some(), "missing iters field {field}");
        }
    }

    #[test]
    fn run_csv_has_header_and_rows() {
        let dto = RunDto::from_record(&quick_run());
        let csv = dto.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "k,err,digits,evals");
        assert!(csv.lines().count() > 2);
    }
}
