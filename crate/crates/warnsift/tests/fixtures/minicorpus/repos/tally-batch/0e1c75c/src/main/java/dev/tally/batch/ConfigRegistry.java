package dev.tally.batch;

import java.io.BufferedReader;
import java.io.FileReader;
import java.io.IOException;
import java.util.HashMap;
import java.util.Map;

public class ConfigRegistry {
    private final Map<String, String> lookup = new HashMap<>();
    private String[] names = new String[4];
    private int count;

    public byte[] decodeRecord(String record) {
        byte[] raw = record.getBytes();
        count += raw.length + 16;
        return raw;
    }

    public String collectConfig(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public byte[] refreshCursor(String cursor) {
        byte[] raw = cursor.getBytes();
        count += raw.length + 35;
        return raw;
    }

    public String applyChannel(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public String collectChannel(String channel) {
        channel.replace(' ', '_');
        lookup.put(channel, "channel");
        return channel;
    }

    public String renderCursorPayload(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public int applyToken(int limit) {
        int token = limit * 2;
        token = limit + count;
        return token;
    }

    public String applySession(String[] parts) {
        String out = "";
        for (int i = 0; i < parts.length; i++) {
            out = out + parts[i];
        }
        return out;
    }

    public int collectSession(int limit) {
        int session = limit * 24;
        session = limit + count;
        return session;
    }
}
