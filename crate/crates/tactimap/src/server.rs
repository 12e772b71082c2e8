//! WebSocket front end. Each connection owns one [`Session`]; frames on a
//! connection are handled strictly in arrival order.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use anyhow::Context;
use futures_util::{SinkExt, StreamExt};
use tokio::net::{TcpListener, TcpStream};
use tokio::task::JoinHandle;
use tokio_tungstenite::tungstenite::Message;
use tracing::{debug, info, warn};

use crate::config::{EngineConfig, MapRegistry};
use crate::protocol::{ClientMessage, ErrorCode, ServerMessage};
use crate::session::Session;

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub addr: SocketAddr,
    pub engine: EngineConfig,
    pub registry: Arc<MapRegistry>,
    /// Directory receiving one `session-NNNNNN.jsonl` log per session.
    pub record_dir: Option<PathBuf>,
}

pub struct ServerHandle {
    pub local_addr: SocketAddr,
    task: JoinHandle<()>,
}

impl ServerHandle {
    pub fn shutdown(self) {
        self.task.abort();
    }

    pub async fn join(self) -> anyhow::Result<()> {
        self.task.await.context("server task failed")
    }
}

/// Binds and starts accepting connections in the background.
pub async fn serve(config: ServeConfig) -> anyhow::Result<ServerHandle> {
    config.engine.gesture.validate().context("bad gesture config")?;
    if let Some(dir) = &config.record_dir {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let listener = TcpListener::bind(config.addr)
        .await
        .with_context(|| format!("binding {}", config.addr))?;
    let local_addr = listener.local_addr()?;
    info!(%local_addr, "listening");
    let config = Arc::new(config);
    let counter = Arc::new(AtomicU64::new(0));
    let task = tokio::spawn(async move {
        loop {
            let (stream, peer) = match listener.accept().await {
                Ok(conn) => conn,
                Err(e) => {
                    warn!(error = %e, "accept failed");
                    continue;
                }
            };
            let n = counter.fetch_add(1, Ordering::Relaxed);
            let config = Arc::clone(&config);
            tokio::spawn(async move {
                if let Err(e) = connection(stream, &config, n).await {
                    debug!(%peer, error = %e, "connection closed with error");
                }
            });
        }
    });
    Ok(ServerHandle { local_addr, task })
}

async fn connection(stream: TcpStream, config: &ServeConfig, n: u64) -> anyhow::Result<()> {
    let ws = tokio_tungstenite::accept_async(stream).await?;
    let (mut tx, mut rx) = ws.split();
    let mut session = Session::new(config.engine, Arc::clone(&config.registry))?;
    let mut saved = false;
    while let Some(frame) = rx.next().await {
        let replies = match frame? {
            Message::Text(text) => match serde_json::from_str::<ClientMessage>(text.as_str()) {
                Ok(msg) => session.handle_client_message(msg),
                Err(e) => vec![ServerMessage::error(ErrorCode::BadFrame, e.to_string())],
            },
            Message::Binary(_) => vec![ServerMessage::error(
                ErrorCode::BadFrame,
                "binary frames are not supported",
            )],
            Message::Close(_) => break,
            _ => continue,
        };
        for reply in replies {
            tx.send(Message::text(reply.to_json())).await?;
        }
        if session.is_ended() && !saved {
            save_log(config, &session, n)?;
            saved = true;
        }
    }
    if !saved {
        save_log(config, &session, n)?;
    }
    Ok(())
}

fn save_log(config: &ServeConfig, session: &Session, n: u64) -> anyhow::Result<()> {
    let (Some(dir), false) = (&config.record_dir, session.log().is_empty()) else {
        return Ok(());
    };
    let path = dir.join(format!("session-{n:06}.jsonl"));
    std::fs::write(&path, session.log().to_jsonl()).with_context(|| format!("writing {}", path.display()))?;
    info!(path = %path.display(), "session log written");
    Ok(())
}
