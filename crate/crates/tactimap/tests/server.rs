mod common;

use std::net::{Ipv4Addr, SocketAddr};
use std::sync::Arc;
use std::time::Duration;

use common::{fuzz_session, run_session};
use futures_util::{SinkExt, StreamExt};
use tactimap::server::{serve, ServeConfig, ServerHandle};
use tactimap::{serialize_map, verify_replay, ClientMessage, EngineConfig, MapRegistry, ServerMessage, SessionLog};
use tactimap_testkit::docs::random_document;
use tactimap_testkit::rng;
use tokio::net::TcpStream;
use tokio_tungstenite::tungstenite::Message;
use tokio_tungstenite::{MaybeTlsStream, WebSocketStream};

type Client = WebSocketStream<MaybeTlsStream<TcpStream>>;

async fn start(record_dir: Option<std::path::PathBuf>) -> ServerHandle {
    serve(ServeConfig {
        addr: SocketAddr::from((Ipv4Addr::LOCALHOST, 0)),
        engine: EngineConfig::default(),
        registry: Arc::new(MapRegistry::default()),
        record_dir,
    })
    .await
    .unwrap()
}

async fn connect(handle: &ServerHandle) -> Client {
    let (ws, _) = tokio_tungstenite::connect_async(format!("ws://{}", handle.local_addr))
        .await
        .unwrap();
    ws
}

async fn recv(ws: &mut Client) -> Option<ServerMessage> {
    match tokio::time::timeout(Duration::from_millis(300), ws.next()).await {
        Ok(Some(Ok(Message::Text(t)))) => Some(serde_json::from_str(t.as_str()).unwrap()),
        _ => None,
    }
}

/// Sends each message and collects replies until the server goes quiet.
async fn exchange(ws: &mut Client, msgs: &[ClientMessage]) -> Vec<ServerMessage> {
    let mut out = Vec::new();
    for m in msgs {
        ws.send(Message::text(serde_json::to_string(m).unwrap())).await.unwrap();
    }
    while let Some(reply) = recv(ws).await {
        out.push(reply);
    }
    out
}

#[tokio::test]
async fn double_tap_on_the_hotel_is_spoken() {
    let server = start(None).await;
    let mut ws = connect(&server).await;
    let msgs = [
        r#"{"type":"load_map","map_id":"fixture"}"#,
        r#"{"type":"touch","phase":"down","touch_id":1,"x":240,"y":135,"t_ms":0}"#,
        r#"{"type":"touch","phase":"up","touch_id":1,"x":240,"y":135,"t_ms":80}"#,
        r#"{"type":"touch","phase":"down","touch_id":2,"x":240.5,"y":135,"t_ms":200}"#,
        r#"{"type":"touch","phase":"up","touch_id":2,"x":240.5,"y":135,"t_ms":260}"#,
    ];
    for m in msgs {
        ws.send(Message::text(m)).await.unwrap();
    }
    let mut got = Vec::new();
    while let Some(m) = recv(&mut ws).await {
        got.push(m);
    }
    assert_eq!(got[0], ServerMessage::MapLoaded { elements: 19 });
    assert!(got.contains(&ServerMessage::Gesture {
        kind: "double_tap".into(),
        element_id: Some("hotel".into())
    }));
    assert!(got
        .iter()
        .any(|m| matches!(m, ServerMessage::Speak { text, .. } if text == "hotel")));
    server.shutdown();
}

#[tokio::test]
async fn concurrent_sessions_on_different_maps_match_offline_runs() {
    let server = start(None).await;
    let a = fuzz_session(21);
    let mut b = fuzz_session(22);
    b[0] = ClientMessage::load_map_svg(serialize_map(&random_document(&mut rng(22), 30)));
    let (mut wa, mut wb) = (connect(&server).await, connect(&server).await);
    let (got_a, got_b) = tokio::join!(exchange(&mut wa, &a), exchange(&mut wb, &b));
    assert_eq!(got_a, run_session(&a).1);
    assert_eq!(got_b, run_session(&b).1);
    server.shutdown();
}

#[tokio::test]
async fn bad_frames_get_an_error_and_the_session_survives() {
    let server = start(None).await;
    let mut ws = connect(&server).await;
    ws.send(Message::text("{\"type\":\"teleport\"}")).await.unwrap();
    ws.send(Message::binary(vec![1u8, 2, 3])).await.unwrap();
    let got = exchange(&mut ws, &[ClientMessage::load_map_id("fixture")]).await;
    let codes: Vec<&str> = got
        .iter()
        .filter_map(|m| match m {
            ServerMessage::Error { code, .. } => Some(code.as_str()),
            _ => None,
        })
        .collect();
    assert_eq!(codes, ["bad-frame", "bad-frame"]);
    assert_eq!(got.last(), Some(&ServerMessage::MapLoaded { elements: 19 }));
    server.shutdown();
}

#[tokio::test]
async fn recorded_sessions_replay_to_the_same_output() {
    let dir = tempfile::tempdir().unwrap();
    let server = start(Some(dir.path().to_path_buf())).await;
    let msgs = fuzz_session(5);
    let mut ws = connect(&server).await;
    let live = exchange(&mut ws, &msgs).await;
    ws.close(None).await.ok();
    let mut logs = Vec::new();
    for _ in 0..50 {
        logs = std::fs::read_dir(dir.path())
            .unwrap()
            .map(|e| e.unwrap().path())
            .collect();
        if !logs.is_empty() {
            break;
        }
        tokio::time::sleep(Duration::from_millis(20)).await;
    }
    assert_eq!(logs.len(), 1);
    let log = SessionLog::parse_jsonl(&std::fs::read_to_string(&logs[0]).unwrap()).unwrap();
    let transcript = verify_replay(&log, EngineConfig::default(), Arc::new(MapRegistry::default())).unwrap();
    let live_text: String = live.iter().map(|m| m.to_json() + "\n").collect();
    assert_eq!(transcript, live_text);
    server.shutdown();
}
