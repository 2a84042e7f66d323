mod common;

use std::net::{SocketAddr, TcpStream};
use std::thread;
use std::time::{Duration, Instant};

use accordiatron::bridge::{Inbound, LiveSession, Outbound};
use accordiatron::serve::Server;
use accordiatron::{run_encode, RunConfig, TraceRecord};
use accordiatron_core::{GestureState, Transmission};
use rand::Rng;
use tungstenite::stream::MaybeTlsStream;
use tungstenite::{Message, WebSocket};

type Client = WebSocket<MaybeTlsStream<TcpStream>>;

fn start_server() -> SocketAddr {
    let server = Server::bind("127.0.0.1:0", RunConfig::default()).unwrap();
    let addr = server.local_addr().unwrap();
    thread::spawn(move || server.run());
    addr
}

fn connect(addr: SocketAddr) -> Client {
    let (ws, _) = tungstenite::connect(format!("ws://{addr}")).unwrap();
    if let MaybeTlsStream::Plain(s) = ws.get_ref() {
        s.set_read_timeout(Some(Duration::from_millis(10))).unwrap();
    }
    ws
}

fn send(ws: &mut Client, text: &str) {
    ws.send(Message::text(text)).unwrap();
}

/// Everything received within `window`.
fn collect(ws: &mut Client, window: Duration) -> Vec<Outbound> {
    let end = Instant::now() + window;
    let mut out = vec![];
    while Instant::now() < end {
        match ws.read() {
            Ok(Message::Text(t)) => out.push(serde_json::from_str(t.as_str()).unwrap()),
            Ok(_) => {}
            Err(tungstenite::Error::Io(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
    out
}

/// Waits for the first message matching `pred`, returning it and how long it took.
fn wait_for(
    ws: &mut Client,
    limit: Duration,
    pred: impl Fn(&Outbound) -> bool,
) -> Option<(Outbound, Duration)> {
    let start = Instant::now();
    while start.elapsed() < limit {
        match ws.read() {
            Ok(Message::Text(t)) => {
                let msg: Outbound = serde_json::from_str(t.as_str()).unwrap();
                if pred(&msg) {
                    return Some((msg, start.elapsed()));
                }
            }
            Ok(_) | Err(tungstenite::Error::Io(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
    None
}

fn midi_bytes(msgs: &[Outbound]) -> Vec<[u8; 3]> {
    msgs.iter()
        .filter_map(|m| match m {
            Outbound::Midi { bytes, .. } => Some(*bytes),
            _ => None,
        })
        .collect()
}

#[test]
fn button_press_arrives_within_100ms() {
    let addr = start_server();
    let mut ws = connect(addr);
    thread::sleep(Duration::from_millis(20));
    send(&mut ws, r#"{"v":1,"type":"button","id":0,"pressed":true}"#);
    let (msg, took) = wait_for(&mut ws, Duration::from_secs(2), |m| {
        matches!(m, Outbound::Midi { .. })
    })
    .expect("no midi message");
    assert!(took < Duration::from_millis(100), "took {took:?}");
    match msg {
        Outbound::Midi {
            v, bytes, decoded, ..
        } => {
            assert_eq!(v, 1);
            assert_eq!(bytes, [147, 60, 127]);
            assert_eq!(decoded, "NoteOn ch4 n60 v127");
        }
        _ => unreachable!(),
    }
    let (stats, _) = wait_for(&mut ws, Duration::from_secs(1), |m| {
        matches!(m, Outbound::Stats { .. })
    })
    .expect("no stats after midi");
    assert!(matches!(stats, Outbound::Stats { sent: 1, .. }));
}

#[test]
fn squeeze_then_repeat_is_change_only() {
    let addr = start_server();
    let mut ws = connect(addr);
    send(&mut ws, r#"{"v":1,"type":"gesture","squeeze":1.0}"#);
    let got = collect(&mut ws, Duration::from_millis(150));
    assert_eq!(midi_bytes(&got), [[0xB0, 0x10, 0x7F]]);

    for _ in 0..5 {
        send(&mut ws, r#"{"v":1,"type":"gesture","squeeze":1.0}"#);
    }
    assert!(midi_bytes(&collect(&mut ws, Duration::from_millis(150))).is_empty());
}

#[test]
fn malformed_input_gets_an_error_reply() {
    let addr = start_server();
    let mut ws = connect(addr);
    for bad in [
        "{",
        r#"{"v":1,"type":"gesture","squeeze":3}"#,
        r#"{"v":9,"type":"mode","pressed":true}"#,
    ] {
        send(&mut ws, bad);
        let (msg, _) = wait_for(&mut ws, Duration::from_secs(1), |_| true).expect("no reply");
        assert!(
            matches!(msg, Outbound::Error { v: 1, .. }),
            "{bad}: {msg:?}"
        );
    }
    // session still usable afterwards
    send(&mut ws, r#"{"v":1,"type":"mode","pressed":true}"#);
    let got = collect(&mut ws, Duration::from_millis(150));
    assert_eq!(midi_bytes(&got), [[0x9D, 0x46, 0x7F]]);
}

#[test]
fn observers_see_output_but_cannot_play() {
    let addr = start_server();
    let mut performer = connect(addr);
    thread::sleep(Duration::from_millis(20));
    let mut observer = connect(addr);
    thread::sleep(Duration::from_millis(20));

    send(
        &mut observer,
        r#"{"v":1,"type":"button","id":3,"pressed":true}"#,
    );
    let (msg, _) = wait_for(&mut observer, Duration::from_secs(1), |_| true).expect("no reply");
    match msg {
        Outbound::Error { message, .. } => assert!(message.contains("read-only"), "{message}"),
        other => panic!("{other:?}"),
    }

    send(
        &mut performer,
        r#"{"v":1,"type":"button","id":3,"pressed":true}"#,
    );
    let seen = collect(&mut observer, Duration::from_millis(150));
    assert_eq!(midi_bytes(&seen), [[0x96, 0x3F, 0x7F]]);
}

#[test]
fn performer_role_passes_on_when_they_leave() {
    let addr = start_server();
    let first = connect(addr);
    thread::sleep(Duration::from_millis(20));
    let mut second = connect(addr);
    thread::sleep(Duration::from_millis(20));
    drop(first);
    thread::sleep(Duration::from_millis(50));

    send(&mut second, r#"{"v":1,"type":"gesture","right":1.0}"#);
    let got = collect(&mut second, Duration::from_millis(150));
    assert_eq!(midi_bytes(&got), [[0xB2, 0x12, 0x7F]]);
}

/// Starts at rest; every later record changes either the axes or exactly
/// one contact, so each maps onto a single inbound message.
fn single_change_trace(seed: u64, len: usize) -> Vec<TraceRecord> {
    let mut rng = common::rng(seed);
    let mut g = GestureState::default();
    let mut t_ms = 0;
    let mut out = vec![TraceRecord { t_ms, gesture: g }];
    for _ in 1..len {
        t_ms += rng.random_range(0..=12);
        match rng.random_range(0..3) {
            0 => g.mode = !g.mode,
            1 => {
                let i = rng.random_range(0..10);
                g.buttons[i] = !g.buttons[i];
            }
            _ => {
                g.squeeze = rng.random_range(0.0..=1.0);
                g.left_rot = rng.random_range(0.0..=1.0);
                g.right_rot = rng.random_range(0.0..=1.0);
            }
        }
        out.push(TraceRecord { t_ms, gesture: g });
    }
    out
}

fn as_inbound(prev: &GestureState, next: &GestureState) -> Inbound {
    if prev.mode != next.mode {
        return Inbound::Mode { pressed: next.mode };
    }
    if let Some(id) = (0..10).find(|&i| prev.buttons[i] != next.buttons[i]) {
        return Inbound::Button {
            id,
            pressed: next.buttons[id],
        };
    }
    Inbound::Gesture {
        squeeze: Some(next.squeeze),
        left: Some(next.left_rot),
        right: Some(next.right_rot),
    }
}

#[test]
fn live_session_matches_batch_encoding() {
    for seed in 0..40 {
        let config = RunConfig {
            emit_initial: seed % 2 == 1,
            ..RunConfig::default()
        };
        let trace = single_change_trace(seed, 60);
        let batch = run_encode(&trace, &config).unwrap();

        let mut live = LiveSession::new(&config).unwrap();
        let mut got: Vec<Transmission> = vec![];
        let mut prev = GestureState::default();
        for (k, rec) in trace.iter().enumerate() {
            let t_us = rec.t_us();
            while let Some(w) = live.next_wakeup_us().filter(|&w| w < t_us) {
                got.extend(live.tick(w).unwrap());
            }
            let msg = as_inbound(&prev, &rec.gesture);
            got.extend(live.apply(&msg, t_us).unwrap());
            assert_eq!(*live.gesture(), rec.gesture, "seed {seed} record {k}");
            prev = rec.gesture;
        }
        while let Some(w) = live.next_wakeup_us() {
            got.extend(live.tick(w).unwrap());
        }
        assert_eq!(got, batch.transmissions, "seed {seed}");
    }
}
