use std::collections::HashMap;
use std::sync::Mutex;

use linecaptcha::GroundTruth;

/// One issued challenge.
#[derive(Clone, Debug, PartialEq)]
pub struct Session {
    pub id: String,
    pub truth: GroundTruth,
    pub issued_at: u64,
    pub expires_at: u64,
    pub consumed: bool,
}

impl Session {
    pub fn new(id: String, truth: GroundTruth, issued_at: u64, ttl_ms: u64) -> Self {
        Self {
            id,
            truth,
            issued_at,
            expires_at: issued_at.saturating_add(ttl_ms),
            consumed: false,
        }
    }

    pub fn is_expired(&self, now_ms: u64) -> bool {
        now_ms >= self.expires_at
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum StoreError {
    #[error("store is full")]
    Full,
    #[error("duplicate session id")]
    Duplicate,
}

/// Result of looking a session up by id.
#[derive(Clone, Debug, PartialEq)]
pub enum Lookup {
    Live(Session),
    Unknown,
    Expired,
    Consumed,
}

/// Session persistence. `take` must check and consume in one atomic step.
pub trait SessionStore: Send + Sync {
    fn put(&self, session: Session, now_ms: u64) -> Result<(), StoreError>;
    /// Marks a live session consumed and returns it; each id is taken at most once.
    fn take(&self, id: &str, now_ms: u64) -> Lookup;
    /// Reads a session without consuming it.
    fn peek(&self, id: &str, now_ms: u64) -> Lookup;
    /// Removes expired sessions, consumed or not. Returns how many were removed.
    fn sweep(&self, now_ms: u64) -> usize;
    fn len(&self) -> usize;
    fn capacity(&self) -> usize;
    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `HashMap` behind a mutex. Consumed sessions stay until expiry so replays
/// are answered with `Consumed` rather than `Unknown`; they count toward capacity.
#[derive(Debug)]
pub struct MemoryStore {
    sessions: Mutex<HashMap<String, Session>>,
    capacity: usize,
}

impl MemoryStore {
    pub fn new(capacity: usize) -> Self {
        Self { sessions: Mutex::new(HashMap::new()), capacity }
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, HashMap<String, Session>> {
        self.sessions.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn ids(&self) -> Vec<String> {
        let mut ids: Vec<_> = self.lock().keys().cloned().collect();
        ids.sort();
        ids
    }
}

fn sweep_map(map: &mut HashMap<String, Session>, now_ms: u64) -> usize {
    let before = map.len();
    map.retain(|_, s| !s.is_expired(now_ms));
    before - map.len()
}

impl SessionStore for MemoryStore {
    fn put(&self, session: Session, now_ms: u64) -> Result<(), StoreError> {
        let mut map = self.lock();
        if map.contains_key(&session.id) {
            return Err(StoreError::Duplicate);
        }
        if map.len() >= self.capacity {
            sweep_map(&mut map, now_ms);
        }
        if map.len() >= self.capacity {
            return Err(StoreError::Full);
        }
        map.insert(session.id.clone(), session);
        Ok(())
    }

    fn take(&self, id: &str, now_ms: u64) -> Lookup {
        let mut map = self.lock();
        let Some(s) = map.get_mut(id) else { return Lookup::Unknown };
        if s.is_expired(now_ms) {
            map.remove(id);
            return Lookup::Expired;
        }
        if s.consumed {
            return Lookup::Consumed;
        }
        s.consumed = true;
        Lookup::Live(s.clone())
    }

    fn peek(&self, id: &str, now_ms: u64) -> Lookup {
        let map = self.lock();
        match map.get(id) {
            None => Lookup::Unknown,
            Some(s) if s.is_expired(now_ms) => Lookup::Expired,
            Some(s) if s.consumed => Lookup::Consumed,
            Some(s) => Lookup::Live(s.clone()),
        }
    }

    fn sweep(&self, now_ms: u64) -> usize {
        sweep_map(&mut self.lock(), now_ms)
    }

    fn len(&self) -> usize {
        self.lock().len()
    }

    fn capacity(&self) -> usize {
        self.capacity
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use linecaptcha::{ChallengeKind, Polyline};

    fn truth() -> GroundTruth {
        GroundTruth {
            challenge_id: String::new(),
            kind: ChallengeKind::BlurredLine,
            reference: Polyline::new(vec![[0.0, 0.0].into(), [10.0, 0.0].into()], 10.0).unwrap(),
            target_color: None,
            image_width: 400,
            image_height: 200,
            seed: 0,
            created_at: 0,
        }
    }

    fn session(id: &str, at: u64, ttl: u64) -> Session {
        Session::new(id.into(), truth(), at, ttl)
    }

    #[test]
    fn take_once() {
        let s = MemoryStore::new(4);
        s.put(session("a", 0, 100), 0).unwrap();
        assert!(matches!(s.take("a", 10), Lookup::Live(_)));
        assert_eq!(s.take("a", 11), Lookup::Consumed);
        assert_eq!(s.peek("a", 11), Lookup::Consumed);
        assert_eq!(s.take("b", 11), Lookup::Unknown);
    }

    #[test]
    fn expiry_boundary() {
        let s = MemoryStore::new(4);
        s.put(session("a", 0, 100), 0).unwrap();
        assert!(matches!(s.peek("a", 99), Lookup::Live(_)));
        assert_eq!(s.take("a", 100), Lookup::Expired);
        assert_eq!(s.take("a", 100), Lookup::Unknown);
    }

    #[test]
    fn capacity_and_sweep_on_put() {
        let s = MemoryStore::new(2);
        s.put(session("a", 0, 50), 0).unwrap();
        s.put(session("b", 0, 500), 0).unwrap();
        assert_eq!(s.put(session("c", 10, 100), 10), Err(StoreError::Full));
        s.put(session("c", 60, 100), 60).unwrap();
        assert_eq!(s.ids(), vec!["b", "c"]);
        assert_eq!(s.put(session("b", 60, 100), 60), Err(StoreError::Duplicate));
    }

    #[test]
    fn sweep_counts() {
        let s = MemoryStore::new(10);
        assert_eq!(s.sweep(0), 0);
        for (i, ttl) in [10u64, 20, 30, 40].iter().enumerate() {
            s.put(session(&i.to_string(), 0, *ttl), 0).unwrap();
        }
        assert!(matches!(s.take("0", 5), Lookup::Live(_)));
        assert_eq!(s.sweep(25), 2);
        assert_eq!(s.ids(), vec!["2", "3"]);
        assert_eq!(s.sweep(1000), 2);
        assert!(s.is_empty());
    }
}
