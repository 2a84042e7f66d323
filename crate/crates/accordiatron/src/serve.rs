//! WebSocket server for the live bridge.
//!
//! The first client to connect plays the instrument; later clients observe.
//! When the performer leaves, the next client to join or send input takes
//! over. All engine work happens on one driver thread fed by a single
//! command channel, so the order inbound messages reach that channel is the
//! order they are applied.

use std::io::ErrorKind;
use std::net::{SocketAddr, TcpListener, TcpStream, ToSocketAddrs};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError, Sender};
use std::thread;
use std::time::{Duration, Instant};

use log::{debug, info, warn};
use tungstenite::Message;

use crate::bridge::{LiveSession, Outbound};
use crate::config::RunConfig;
use crate::error::ShellError;

const POLL: Duration = Duration::from_millis(2);

enum Command {
    Join { id: u64, tx: Sender<String> },
    Inbound { id: u64, text: String },
    Leave { id: u64 },
}

pub struct Server {
    listener: TcpListener,
    config: RunConfig,
}

impl Server {
    pub fn bind(addr: impl ToSocketAddrs, config: RunConfig) -> Result<Self, ShellError> {
        // build the session up front so a bad config fails before listening
        LiveSession::new(&config)?;
        let listener = TcpListener::bind(addr).map_err(|source| ShellError::Io {
            path: "listen socket".into(),
            source,
        })?;
        Ok(Self { listener, config })
    }

    pub fn local_addr(&self) -> std::io::Result<SocketAddr> {
        self.listener.local_addr()
    }

    /// Serves until the listener fails.
    pub fn run(self) -> Result<(), ShellError> {
        let session = LiveSession::new(&self.config)?;
        let (cmd_tx, cmd_rx) = mpsc::channel();
        thread::Builder::new()
            .name("bridge-driver".into())
            .spawn(move || Driver::new(session).run(cmd_rx))
            .expect("spawn driver thread");

        for (id, stream) in (0u64..).zip(self.listener.incoming()) {
            let stream = match stream {
                Ok(s) => s,
                Err(e) => {
                    warn!("accept failed: {e}");
                    continue;
                }
            };
            let cmd_tx = cmd_tx.clone();
            thread::Builder::new()
                .name(format!("bridge-conn-{id}"))
                .spawn(move || connection(stream, id, cmd_tx))
                .expect("spawn connection thread");
        }
        Ok(())
    }
}

fn connection(stream: TcpStream, id: u64, cmd_tx: Sender<Command>) {
    let peer = stream.peer_addr().ok();
    let mut ws = match tungstenite::accept(stream) {
        Ok(ws) => ws,
        Err(e) => {
            warn!("handshake with {peer:?} failed: {e}");
            return;
        }
    };
    if let Err(e) = ws.get_ref().set_read_timeout(Some(POLL)) {
        warn!("set_read_timeout: {e}");
        return;
    }
    info!("client {id} connected from {peer:?}");

    let (out_tx, out_rx) = mpsc::channel();
    if cmd_tx.send(Command::Join { id, tx: out_tx }).is_err() {
        return;
    }

    'conn: loop {
        match ws.read() {
            Ok(Message::Text(text)) => {
                let text = text.as_str().to_owned();
                if cmd_tx.send(Command::Inbound { id, text }).is_err() {
                    break;
                }
            }
            Ok(Message::Binary(data)) => {
                let text = String::from_utf8_lossy(&data).into_owned();
                if cmd_tx.send(Command::Inbound { id, text }).is_err() {
                    break;
                }
            }
            Ok(_) => {}
            Err(tungstenite::Error::Io(e))
                if matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut) => {}
            Err(e) => {
                debug!("client {id}: {e}");
                break;
            }
        }

        let mut wrote = false;
        while let Ok(text) = out_rx.try_recv() {
            if ws.write(Message::text(text)).is_err() {
                break 'conn;
            }
            wrote = true;
        }
        if wrote && ws.flush().is_err() {
            break;
        }
    }
    info!("client {id} disconnected");
    let _ = cmd_tx.send(Command::Leave { id });
}

struct Driver {
    session: LiveSession,
    performer: Option<u64>,
    clients: Vec<(u64, Sender<String>)>,
    epoch: Instant,
}

impl Driver {
    fn new(session: LiveSession) -> Self {
        Self {
            session,
            performer: None,
            clients: Vec::new(),
            epoch: Instant::now(),
        }
    }

    fn now_us(&self) -> u64 {
        self.epoch.elapsed().as_micros() as u64
    }

    fn run(mut self, rx: Receiver<Command>) {
        loop {
            let received = match self.session.next_wakeup_us() {
                Some(wake) => {
                    let wait = Duration::from_micros(wake.saturating_sub(self.now_us()));
                    rx.recv_timeout(wait)
                }
                None => rx.recv().map_err(|_| RecvTimeoutError::Disconnected),
            };
            match received {
                Ok(cmd) => self.handle(cmd),
                Err(RecvTimeoutError::Timeout) => {}
                Err(RecvTimeoutError::Disconnected) => return,
            }
            let now = self.now_us();
            match self.session.tick(now) {
                Ok(out) => self.broadcast(&out),
                Err(e) => warn!("engine tick failed: {e}"),
            }
        }
    }

    fn handle(&mut self, cmd: Command) {
        match cmd {
            Command::Join { id, tx } => {
                if self.performer.is_none() {
                    self.performer = Some(id);
                    info!("client {id} is the performer");
                }
                self.clients.push((id, tx));
            }
            Command::Leave { id } => {
                self.clients.retain(|(c, _)| *c != id);
                if self.performer == Some(id) {
                    self.performer = None;
                }
            }
            Command::Inbound { id, text } => {
                if self.performer.is_none() {
                    self.performer = Some(id);
                }
                if self.performer != Some(id) {
                    self.reply(id, Outbound::error("observer sessions are read-only"));
                    return;
                }
                let now = self.now_us();
                match self.session.handle(&text, now) {
                    Ok(out) => self.broadcast(&out),
                    Err(message) => self.reply(id, Outbound::error(message)),
                }
            }
        }
    }

    fn reply(&mut self, id: u64, msg: Outbound) {
        let json = msg.to_json();
        self.clients
            .retain(|(c, tx)| *c != id || tx.send(json.clone()).is_ok());
    }

    fn broadcast(&mut self, out: &[accordiatron_core::Transmission]) {
        if out.is_empty() {
            return;
        }
        let mut messages: Vec<String> = out.iter().map(|t| Outbound::midi(t).to_json()).collect();
        messages.push(Outbound::stats(&self.session.stats()).to_json());
        self.clients
            .retain(|(_, tx)| messages.iter().all(|m| tx.send(m.clone()).is_ok()));
    }
}
