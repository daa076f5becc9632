export interface GatewayEvent {
  seq: number;
  at_ms: number;
  kind: string;
  payload: Record<string, any>;
}

export interface WorldInfo {
  id: string;
  task_id: number;
  task: string;
}

export interface MissionReport {
  task: string;
  world: string;
  mode: string;
  success: boolean;
  r_time: number | null;
  c_time: number;
  tokens: number;
}

export interface DronePose {
  x: number;
  y: number;
  z: number;
  yaw: number;
}

export interface ObjectMarker {
  label: string;
  x: number;
  y: number;
  z: number;
  color: string;
  radius: number;
}
