//! Checkpoint files for resumable campaigns.
//!
//! ```text
//! {"format":"wilfcheck-checkpoint","version":1,"max_genus":20,"suite_hash":"…","pending":3}
//! {"counts":[…],"laws":[…],…}          tallies so far
//! [1,2,3]                              pending subtree roots as gap arrays,
//! [1,2,4]                              in processing order
//! sha256 <hex digest of everything above>
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::campaign::{CampaignError, Tallies};
use crate::semigroup::NumericalSemigroup;
use crate::tree::{Frontier, TreeNode};

const FORMAT: &str = "wilfcheck-checkpoint";
const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct Header {
    format: String,
    version: u32,
    max_genus: u32,
    suite_hash: String,
    pending: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Checkpoint {
    pub suite_hash: String,
    pub tallies: Tallies,
    /// Remaining work; its counts mirror `tallies.counts`.
    pub frontier: Frontier,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn corrupt(msg: impl Into<String>) -> CampaignError {
    CampaignError::CorruptCheckpoint(msg.into())
}

impl Checkpoint {
    pub fn to_bytes(&self) -> Vec<u8> {
        let header = Header {
            format: FORMAT.into(),
            version: VERSION,
            max_genus: self.frontier.max_genus,
            suite_hash: self.suite_hash.clone(),
            pending: self.frontier.pending.len(),
        };
        let mut body = Vec::new();
        let line = |body: &mut Vec<u8>, json: String| {
            body.extend_from_slice(json.as_bytes());
            body.push(b'\n');
        };
        line(
            &mut body,
            serde_json::to_string(&header).expect("header serializes"),
        );
        line(
            &mut body,
            serde_json::to_string(&self.tallies).expect("tallies serialize"),
        );
        for node in self.frontier.pending.iter().rev() {
            line(
                &mut body,
                serde_json::to_string(&node.semigroup.gaps()).expect("gaps serialize"),
            );
        }
        let digest = sha256_hex(&body);
        body.extend_from_slice(format!("sha256 {digest}\n").as_bytes());
        body
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, CampaignError> {
        let text = std::str::from_utf8(bytes).map_err(|_| corrupt("not UTF-8"))?;
        let body_end = text
            .trim_end_matches('\n')
            .rfind('\n')
            .map(|i| i + 1)
            .ok_or_else(|| corrupt("missing checksum line"))?;
        let (body, trailer) = text.split_at(body_end);
        let digest = trailer
            .trim_end()
            .strip_prefix("sha256 ")
            .ok_or_else(|| corrupt("missing checksum line"))?;
        if digest != sha256_hex(body.as_bytes()) {
            return Err(corrupt("checksum mismatch"));
        }

        let mut lines = body.lines();
        let header: Header = lines
            .next()
            .and_then(|l| serde_json::from_str(l).ok())
            .ok_or_else(|| corrupt("bad header"))?;
        if header.format != FORMAT || header.version != VERSION {
            return Err(corrupt(format!(
                "unsupported format {} v{}",
                header.format, header.version
            )));
        }
        let tallies: Tallies = lines
            .next()
            .and_then(|l| serde_json::from_str(l).ok())
            .ok_or_else(|| corrupt("bad tallies line"))?;
        let mut pending = Vec::with_capacity(header.pending);
        for l in lines {
            let gaps: Vec<u32> =
                serde_json::from_str(l).map_err(|_| corrupt("bad frontier line"))?;
            let s = NumericalSemigroup::from_gaps(&gaps)
                .map_err(|e| corrupt(format!("bad frontier entry: {e}")))?;
            pending.push(TreeNode::from_semigroup(s));
        }
        if pending.len() != header.pending {
            return Err(corrupt("frontier length does not match header"));
        }
        pending.reverse();
        let frontier = Frontier {
            max_genus: header.max_genus,
            pending,
            counts: tallies.counts.clone(),
        };
        Ok(Checkpoint {
            suite_hash: header.suite_hash,
            tallies,
            frontier,
        })
    }

    /// Writes atomically: a sibling temp file is renamed over `path`.
    pub fn write(&self, path: &Path) -> Result<(), CampaignError> {
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = std::path::PathBuf::from(tmp);
        {
            let mut f = fs::File::create(&tmp)?;
            f.write_all(&self.to_bytes())?;
            f.sync_all()?;
        }
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self, CampaignError> {
        Self::from_bytes(&fs::read(path)?)
    }
}
