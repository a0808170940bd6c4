//! Interactive session: load a database, run queries, inspect plans.

use std::io::{self, BufRead, Write};
use std::path::Path;

use crate::error::Error;
use crate::model::DndbInstance;
use crate::query::{explain_plan, parse_query};
use crate::storage::{execute, load_database, LoadedDatabase};

const HELP: &str = "\
commands:
  <query>            evaluate a query against the loaded database (bound as db)
  :load <path>       load a database file
  :explain <query>   show the plan before and after rewriting
  :help              show this text
  :quit              leave the session
";

pub struct Session {
    db: Option<LoadedDatabase>,
    next_query: u64,
}

impl Default for Session {
    fn default() -> Self {
        Self::new()
    }
}

impl Session {
    pub fn new() -> Self {
        Self {
            db: None,
            next_query: 1,
        }
    }

    pub fn with_database(db: LoadedDatabase) -> Self {
        Self {
            db: Some(db),
            next_query: 1,
        }
    }

    /// Replaces the current database. Returns the load warnings.
    pub fn load(&mut self, path: impl AsRef<Path>) -> Result<Vec<String>, Error> {
        let db = load_database(path)?;
        let warnings = db.warnings.clone();
        self.db = Some(db);
        Ok(warnings)
    }

    pub fn database(&self) -> Option<&LoadedDatabase> {
        self.db.as_ref()
    }

    /// Evaluates `query`. Every successful query consumes one query id.
    pub fn run(&mut self, query: &str) -> Result<DndbInstance, Error> {
        let empty;
        let db = match &self.db {
            Some(db) => db,
            None => {
                empty = LoadedDatabase {
                    instance: DndbInstance::empty(),
                    store: Default::default(),
                    warnings: Vec::new(),
                };
                &empty
            }
        };
        let (result, _) = execute(db, query, self.next_query)?;
        self.next_query += 1;
        Ok(result)
    }
}

/// Renders narratives as a table with one row per message.
pub fn render_table(instance: &DndbInstance) -> String {
    let header = ["narrative", "#", "characters", "measures", "predicate"];
    let mut rows: Vec<[String; 5]> = Vec::new();
    for n in instance.iter() {
        let name = n.name().unwrap_or("-").to_string();
        if n.is_empty() {
            rows.push([
                name,
                "-".into(),
                "(empty narrative)".into(),
                String::new(),
                String::new(),
            ]);
            continue;
        }
        for (i, m) in n.messages().iter().enumerate() {
            let join = |items: Vec<&str>| items.join(", ");
            rows.push([
                if i == 0 { name.clone() } else { String::new() },
                (i + 1).to_string(),
                join(m.characters.iter().map(|c| c.as_str()).collect()),
                join(m.measures.iter().map(|v| v.as_str()).collect()),
                m.predicate.as_str().to_string(),
            ]);
        }
    }
    let mut widths = header.map(|h| h.chars().count());
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: &[String]| {
        let used = cells
            .iter()
            .rposition(|c| !c.is_empty())
            .map_or(0, |i| i + 1);
        let padded: Vec<String> = cells[..used]
            .iter()
            .zip(widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        padded.join(" | ").trim_end().to_string() + "\n"
    };
    let mut out = line(&header.map(String::from));
    out.push_str(&line(&widths.map(|w| "-".repeat(w))));
    for row in &rows {
        out.push_str(&line(row));
    }
    let count = instance.len();
    out.push_str(&format!(
        "({count} narrative{})\n",
        if count == 1 { "" } else { "s" }
    ));
    out
}

/// Reads commands from `input` until `:quit` or end of input. Errors are
/// reported on `out` and the session continues.
pub fn run_repl(session: &mut Session, input: impl BufRead, mut out: impl Write) -> io::Result<()> {
    write!(out, "dnml> ")?;
    out.flush()?;
    for line in input.lines() {
        let line = line?;
        let line = line.trim();
        if line == ":quit" || line == ":q" {
            break;
        }
        if !line.is_empty() {
            let reply = handle(session, line);
            out.write_all(reply.as_bytes())?;
        }
        write!(out, "dnml> ")?;
        out.flush()?;
    }
    writeln!(out)?;
    Ok(())
}

fn handle(session: &mut Session, line: &str) -> String {
    let (command, rest) = match line.split_once(char::is_whitespace) {
        Some((c, r)) => (c, r.trim()),
        None => (line, ""),
    };
    match command {
        ":help" => HELP.to_string(),
        ":load" if rest.is_empty() => "error: :load needs a path\n".to_string(),
        ":load" => match session.load(rest) {
            Ok(warnings) => {
                let mut reply = String::new();
                for w in warnings {
                    reply.push_str(&format!("warning: {w}\n"));
                }
                let n = session.database().map_or(0, |db| db.instance.len());
                reply.push_str(&format!("loaded {rest} ({n} narratives)\n"));
                reply
            }
            Err(e) => format!("error: {e}\n"),
        },
        ":explain" => match parse_query(rest) {
            Ok(e) => explain_plan(&e),
            Err(e) => format!("error: {e}\n"),
        },
        c if c.starts_with(':') => format!("error: unknown command {c} (try :help)\n"),
        _ => match session.run(line) {
            Ok(result) => render_table(&result),
            Err(e) => format!("error: {e}\n"),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{mk_message, Narrative};

    #[test]
    fn table_lists_each_message() {
        let inst = DndbInstance::from_narratives([
            Narrative::named(
                "n1",
                vec![
                    mk_message(["a", "b"], ["v"], "p").unwrap(),
                    mk_message(["c"], [], "").unwrap(),
                ],
            ),
            Narrative::named("n2", vec![]),
        ]);
        let table = render_table(&inst);
        let lines: Vec<&str> = table.lines().collect();
        assert_eq!(
            lines[0],
            "narrative | # | characters        | measures | predicate"
        );
        assert_eq!(lines[2], "n1        | 1 | a, b              | v        | p");
        assert_eq!(lines[3], "          | 2 | c");
        assert_eq!(lines[4], "n2        | - | (empty narrative)");
        assert_eq!(lines[5], "(2 narratives)");
    }

    #[test]
    fn errors_do_not_end_the_session() {
        let mut session = Session::new();
        let input = "select(\nfoo\n:bogus\nempty\n:quit\nempty\n";
        let mut out = Vec::new();
        run_repl(&mut session, input.as_bytes(), &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert!(text.contains("error: 1:8"), "{text}");
        assert!(text.contains("error: unbound source `foo`"), "{text}");
        assert!(text.contains("unknown command :bogus"), "{text}");
        assert_eq!(text.matches("(0 narratives)").count(), 1, "{text}");
    }
}
